from .control import (ControllerState, NoReachableRoute, pickup_decision,
                      practical_sync, select_route, stationary_enqueue,
                      update_deficit, update_queues)
from .engine import MuleResult, MuleSim
from .lp import (CostModel, Flow, Infeasible, Route, Unbounded,
                 reference_lp_solve, simplex_solve, supportability_check)

__all__ = ["ControllerState", "NoReachableRoute", "pickup_decision",
           "practical_sync", "select_route", "stationary_enqueue",
           "update_deficit", "update_queues", "MuleResult", "MuleSim",
           "CostModel", "Flow", "Infeasible", "Route", "Unbounded",
           "reference_lp_solve", "simplex_solve", "supportability_check"]
