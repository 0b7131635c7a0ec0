from .engine import LineDelaySim, TwoScaleRcSim
from .grid import GridBpsrSim, GridFlow
from .mobility import MobileState, ring_chain, shuttle, stationary_distribution
from .shadow import ShadowQueuePair, shadow_serve
from . import twoscale

__all__ = ["LineDelaySim", "TwoScaleRcSim", "GridBpsrSim", "GridFlow", "MobileState", "ring_chain",
           "shuttle", "stationary_distribution", "ShadowQueuePair",
           "shadow_serve", "twoscale"]
