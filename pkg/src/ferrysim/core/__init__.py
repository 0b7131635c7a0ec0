from .clock import SlotClock
from .metrics import MetricsSink, OutOfOrderRecord
from .rng import SeededRng
from .topology import TopologyGraph, TopologyError, build_topology

__all__ = ["SlotClock", "MetricsSink", "OutOfOrderRecord", "SeededRng",
           "TopologyGraph", "TopologyError", "build_topology"]
