from .queues import PerDestQueues, QueueError
from .ratecontrol import UtilityFlow, rate_control_step, rate_estimate_update
from .scheduling import InterferenceModel, backpressure_weights, maxweight_schedule

__all__ = ["PerDestQueues", "QueueError", "UtilityFlow", "rate_control_step",
           "rate_estimate_update", "InterferenceModel", "backpressure_weights",
           "maxweight_schedule"]
