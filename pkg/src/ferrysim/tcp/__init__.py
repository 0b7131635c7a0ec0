from .acks import AckEvent, AckKind, ArrivingPacket, ReceiverState, dest_ack_logic
from .analysis import (BetaSolution, rate_function_lprime, simulate_mean_window,
                       solve_beta, steady_state_oracle, throughput_lower_bound)
from .channel import ChannelProfile, ChannelState, bimodal, fresh_state
from .coding import FIELD, CodingBlock, decode_check, encode_block
from .engine import MultipathResult, MultipathSim, multipath_controller_step
from .router import RouterQueues, router_serve
from .windows import aqm_marking, f_eff, path_window_step, rtt_estimator, rto, window_step

__all__ = ["AckEvent", "AckKind", "ArrivingPacket", "ReceiverState",
           "dest_ack_logic", "BetaSolution", "rate_function_lprime",
           "simulate_mean_window", "solve_beta", "steady_state_oracle",
           "throughput_lower_bound", "ChannelProfile", "ChannelState", "bimodal",
           "fresh_state", "FIELD", "CodingBlock", "decode_check", "encode_block",
           "MultipathResult", "MultipathSim", "multipath_controller_step",
           "RouterQueues", "router_serve", "aqm_marking", "f_eff",
           "path_window_step", "rtt_estimator", "rto", "window_step"]
