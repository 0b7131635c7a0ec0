"""Deterministic slotted-time simulation toolkit for data-ferry networks:
two-scale back-pressure routing for intermittently connected clusters,
min-cost controlled mobility with deficit counters, and coded multipath TCP
over fading downlinks, each paired with its analytic reference oracle."""

__version__ = "0.1.0"
