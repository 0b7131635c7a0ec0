"""AIMD window arithmetic, loss-probability composition, and RTT tracking."""

import math


def window_step(w: int, success: bool) -> int:
    """W+1 on success, ceil(W/2) on drop; the window never leaves [1, inf)."""
    if w < 1:
        raise ValueError("window must be >= 1")
    return w + 1 if success else (w + 1) // 2


def path_window_step(w_l: int, success: bool) -> int:
    """Per-path window: same arithmetic; success means w_l packets of any
    priority arrived on the path this slot."""
    return window_step(w_l, success)


def f_eff(f_aqm: float, f_chan: float) -> float:
    """Combined halving probability of AQM marking and channel decode failure."""
    if not (0.0 <= f_aqm <= 1.0 and 0.0 <= f_chan <= 1.0):
        raise ValueError("probabilities must lie in [0,1]")
    return f_aqm + f_chan - f_aqm * f_chan


def rtt_estimator(measured: float, sample: float) -> float:
    """IIR smoother: 0.9 * old + 0.1 * sample."""
    if sample <= 0:
        raise ValueError("RTT sample must be positive")
    return 0.9 * measured + 0.1 * sample


def rto(measured: float) -> float:
    """Retransmission timeout fires after 3 measured RTTs."""
    return 3.0 * measured


def aqm_marking(w: int, beta: float, f_chan_w: float, floor_mode: bool = True) -> float:
    """The throughput-bound AQM: marks so the effective drop rate is flat at
    2/beta below floor(beta) and certain above it."""
    if beta <= 1:
        return 1.0
    cut = math.floor(beta) if floor_mode else beta
    if w >= cut:
        return 1.0
    target = 2.0 / beta
    if f_chan_w >= 1.0:
        return 0.0
    mark = (target - f_chan_w) / (1.0 - f_chan_w)
    return min(1.0, max(0.0, mark))
