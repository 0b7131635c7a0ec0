"""Analytic oracles for the coded-multipath window chain.

l'(a) is the Legendre transform of the log-MGF of (1-P); beta solves
1/beta = exp(-M l'(1 - rho beta / (MC))) on [p1 MC/rho^2, E[P] MC/rho^2];
the throughput lower bound dispatches on which side of that bracket fails;
the steady-state oracle diagonalizes the truncated AIMD chain.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .channel import ChannelProfile

INF_RATE = float("inf")


def _log_mgf(theta: float, profile: ChannelProfile) -> float:
    # log E[exp(theta (1-P))], stabilized against overflow
    terms = [(math.log(w) if w > 0 else -math.inf) + theta * (1.0 - p)
             for p, w in profile.levels if w > 0]
    m = max(terms)
    return m + math.log(sum(math.exp(t - m) for t in terms))


def _tilted_mean(theta: float, profile: ChannelProfile) -> float:
    # d/dtheta log MGF: mean of (1-P) under the exponentially tilted law
    logw = [(math.log(w) if w > 0 else -math.inf) + theta * (1.0 - p)
            for p, w in profile.levels if w > 0]
    m = max(logw)
    weights = [math.exp(t - m) for t in logw]
    vals = [1.0 - p for p, w in profile.levels if w > 0]
    s = sum(weights)
    return sum(v * wt for v, wt in zip(vals, weights)) / s


def rate_function_lprime(a: float, profile: ChannelProfile) -> float:
    """sup_theta { theta a - log E[e^{theta(1-P)}] }; zero at a = E[1-P],
    +inf outside the support hull (point masses included)."""
    if not 0.0 < a < 1.0:
        raise ValueError("a must lie in (0,1)")
    lo_val = 1.0 - profile.p_max          # smallest achievable (1-P)
    hi_val = 1.0 - profile.p_min
    mean = 1.0 - profile.mean_p
    if abs(a - mean) < 1e-15:
        return 0.0
    if a < lo_val or a > hi_val:
        return INF_RATE
    if a == lo_val or a == hi_val:
        # boundary atom: the rate is the negative log-mass of that level
        for p, w in profile.levels:
            if abs((1.0 - p) - a) < 1e-15:
                return -math.log(w) if w > 0 else INF_RATE
        return INF_RATE
    # the maximizer solves tilted_mean(theta) = a; tilted_mean is increasing
    lo, hi = -1.0, 1.0
    while _tilted_mean(lo, profile) > a:
        lo *= 2.0
        if lo < -1e8:
            break
    while _tilted_mean(hi, profile) < a:
        hi *= 2.0
        if hi > 1e8:
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _tilted_mean(mid, profile) < a:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13 * max(1.0, abs(hi)):
            break
    theta = 0.5 * (lo + hi)
    return max(0.0, theta * a - _log_mgf(theta, profile))


@dataclass
class BetaSolution:
    beta: Optional[float]
    regime: str                   # "partial", "no_diversity", "full_diversity"
    residual: float               # |1/beta - exp(-M l')| at the returned beta


def _beta_residual(beta: float, M: int, C: float, rho: float,
                   profile: ChannelProfile) -> float:
    a = 1.0 - rho * beta / (M * C)
    if a <= 0.0:
        lp = INF_RATE
    elif a >= 1.0:
        lp = INF_RATE
    else:
        lp = rate_function_lprime(a, profile)
    rhs = 0.0 if lp == INF_RATE else math.exp(-M * lp)
    return 1.0 / beta - rhs


def solve_beta(M: int, C: float, rho: float, profile: ChannelProfile) -> BetaSolution:
    """Bisection for 1/beta = exp(-M l'(1 - rho beta/(MC))) on the bracket
    [p1 MC/rho^2, E[P] MC/rho^2]; the residual is strictly decreasing in beta."""
    if rho <= 1 or M < 1 or C < 1:
        raise ValueError("need rho > 1, M >= 1, C >= 1")
    lo = profile.p_min * M * C / rho ** 2
    hi = profile.mean_p * M * C / rho ** 2
    r_lo = _beta_residual(lo, M, C, rho, profile)
    r_hi = _beta_residual(hi, M, C, rho, profile)
    if r_lo < 0.0:
        # 1/beta below the RHS already at the low end: too few paths
        return BetaSolution(None, "no_diversity", r_lo)
    if r_hi > 0.0:
        # 1/beta still above the RHS at the high end: full diversity
        return BetaSolution(None, "full_diversity", r_hi)
    a, b = lo, hi
    for _ in range(400):
        mid = 0.5 * (a + b)
        if _beta_residual(mid, M, C, rho, profile) > 0.0:
            a = mid
        else:
            b = mid
        beta = 0.5 * (a + b)
        if abs(_beta_residual(beta, M, C, rho, profile)) < 1e-9 / beta:
            break
    beta = 0.5 * (a + b)
    residual = _beta_residual(beta, M, C, rho, profile)
    if abs(residual) > 1e-8 / beta:
        # the residual jumps over zero where the rate function leaves the
        # support of 1-P (boundary atom); no exact root exists, but the
        # crossing point still yields a valid conservative AQM level
        return BetaSolution(beta, "jump_point", residual)
    return BetaSolution(beta, "partial", residual)


def throughput_lower_bound(M: int, C: float, rho: float, profile: ChannelProfile,
                           delta1: float = 0.0, delta2: float = 0.0,
                           solution: Optional[BetaSolution] = None) -> Tuple[float, str]:
    """The guaranteed mean-window bound and the regime it came from.

    Note the no-diversity regime cannot actually fire for these profiles:
    at the bracket's low end the rate-function argument 1 - p1/rho exceeds
    the support of 1-P, so the right side is exactly zero there.  The branch
    is kept as stated; `solution` lets tests drive it directly.
    """
    sol = solution if solution is not None else solve_beta(M, C, rho, profile)
    base = 0.75 * profile.p_min * M * C / rho ** 2 - 1.0
    if sol.regime == "no_diversity":
        return base, sol.regime
    beta = sol.beta if sol.regime in ("partial", "jump_point") \
        else profile.mean_p * M * C / rho ** 2
    floor_beta = math.floor(beta)
    if floor_beta < 1:
        return base, sol.regime
    bracket = 1.0 - 3.0 / floor_beta - 2.0 * (math.exp(-1.0) + delta2)
    cap = (profile.mean_p * M * C / rho ** 2) * (1.0 - 3.0 * delta1
                                                 - 2.0 * (math.exp(-1.0) + delta2))
    return max(base, min(cap, beta * bracket)), sol.regime


def kl_divergence(x: float, y: float) -> float:
    """Binary Kullback-Leibler distance D(x || y)."""
    if not (0.0 <= x <= 1.0 and 0.0 < y < 1.0):
        if y in (0.0, 1.0) and x != y:
            return INF_RATE
        raise ValueError("arguments must be probabilities")
    parts = 0.0
    if x > 0:
        parts += x * math.log(x / y)
    if x < 1:
        parts += (1.0 - x) * math.log((1.0 - x) / (1.0 - y))
    return parts


def concentration_constants(M: int, C: float, rho: float,
                            profile: ChannelProfile, n: int = 2001) -> Tuple[float, float]:
    """Numeric infima of the two KL exponents behind the channel-failure
    bound: L1 over the mid band p1 <= rho^2 w/(MC) <= E[P] of
    D(1 - w/MC || 1 - rho w/MC), and L2 over the low band of
    D(1 - w/MC || 1 - p1).  Plotting/test helper; no runtime logic uses it.
    """
    p1, ep = profile.p_min, profile.mean_p
    l1 = INF_RATE
    for k in range(n):
        w = (p1 + (ep - p1) * k / (n - 1)) * M * C / rho ** 2
        a, b = 1.0 - w / (M * C), 1.0 - rho * w / (M * C)
        if 0.0 <= a <= 1.0 and 0.0 < b < 1.0:
            l1 = min(l1, kl_divergence(a, b))
    l2 = INF_RATE
    for k in range(1, n):
        w = (p1 * k / (n - 1)) * M * C / rho ** 2
        a = 1.0 - w / (M * C)
        l2 = min(l2, kl_divergence(a, 1.0 - p1))
    return l1, l2


def steady_state_oracle(f_eff_of_w: Callable[[int], float], w_max: int,
                        tol: float = 1e-12) -> Tuple[np.ndarray, float]:
    """Stationary law of the truncated AIMD chain (up-moves self-loop at
    w_max) by power iteration; returns (pi over 1..w_max, E[W])."""
    if w_max < 2:
        raise ValueError("need w_max >= 2")
    P = np.zeros((w_max, w_max))
    for w in range(1, w_max + 1):
        f = f_eff_of_w(w)
        if not 0.0 <= f <= 1.0:
            raise ValueError("f_eff(%d) = %r outside [0,1]" % (w, f))
        up = w + 1 if w < w_max else w_max
        down = (w + 1) // 2
        P[w - 1, up - 1] += 1.0 - f
        P[w - 1, down - 1] += f
    pi = np.full(w_max, 1.0 / w_max)
    for _ in range(1000000):
        nxt = pi @ P
        if np.abs(nxt - pi).max() < tol:
            pi = nxt
            break
        pi = nxt
    pi = pi / pi.sum()
    ew = float(pi @ np.arange(1, w_max + 1))
    return pi, ew


def simulate_mean_window(f: float, slots: int, rng, w_max: int = 400) -> float:
    """Time-average window of the constant-f chain over `slots` steps.

    Success runs between drops are geometric, so the chain is simulated one
    sojourn at a time (identical law to the slot-by-slot walk) and the
    within-run window sum is accumulated in closed form.
    """
    if not 0.0 < f <= 1.0:
        raise ValueError("constant f must lie in (0,1]")
    w = 1
    total = 0.0
    done = 0
    while done < slots:
        g = int(rng.geometric(f)) - 1          # successes before the drop
        steps = g + 1                          # plus the drop slot itself
        if done + steps > slots:
            steps = slots - done
            g = steps                          # truncated: successes only
            top = min(w + g - 1, w_max)
            ramp = top - w + 1
            total += (w + top) * ramp / 2.0 + (steps - ramp) * w_max
            done += steps
            break
        # window values over the sojourn: w, w+1, ... capped at w_max,
        # with the drop slot still showing the pre-drop value
        top = min(w + g, w_max)
        ramp = top - w + 1
        total += (w + top) * ramp / 2.0 + (steps - ramp) * w_max
        done += steps
        w = (min(w + g, w_max) + 1) // 2
    return total / slots
