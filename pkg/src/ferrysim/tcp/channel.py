"""Block-fading Bernoulli downlink: the per-packet delivery probability holds
for a random time, then redraws from the profile."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np


@dataclass
class ChannelProfile:
    levels: List[Tuple[float, float]]      # (p_k, tilde_p_k), ordered p_1 < ... <= 1
    hold_lo: float = 100.0                 # hold time range, in ms
    hold_hi: float = 200.0

    def __post_init__(self):
        ps = [p for p, _ in self.levels]
        weights = [w for _, w in self.levels]
        if not ps or ps[0] <= 0 or any(p <= 0 or p > 1 for p in ps):
            raise ValueError("delivery probabilities must lie in (0,1] with p_1 > 0")
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise ValueError("levels must be strictly increasing in p")
        if abs(sum(weights) - 1.0) > 1e-9 or any(w < 0 for w in weights):
            raise ValueError("level weights must form a distribution")
        if self.hold_lo <= 0 or self.hold_hi < self.hold_lo:
            raise ValueError("need 0 < hold_lo <= hold_hi")

    @property
    def p_min(self) -> float:
        return self.levels[0][0]

    @property
    def p_max(self) -> float:
        return self.levels[-1][0]

    @property
    def mean_p(self) -> float:
        return sum(p * w for p, w in self.levels)

    def redundancy(self) -> int:
        """Integer r with (1+r) p_min ~= 2, satisfying r > 2(1-p_min)/p_min."""
        return max(1, round(2.0 / self.p_min) - 1)


def bimodal(p_low: float, weight_low: float = 0.1, p_high: float = 1.0,
            hold_lo: float = 100.0, hold_hi: float = 200.0) -> ChannelProfile:
    return ChannelProfile([(p_low, weight_low), (p_high, 1.0 - weight_low)],
                          hold_lo, hold_hi)


@dataclass
class ChannelState:
    profile: ChannelProfile
    p: float = 0.0
    hold_left: float = 0.0

    def evolve(self, rng: np.random.Generator, elapsed: float) -> float:
        """Consume `elapsed` ms, redrawing the level at every hold expiry;
        returns the time-weighted mean delivery probability over the window
        (holds are shorter than an RTT, so states straddle slot boundaries)."""
        if elapsed < 0:
            raise ValueError("elapsed must be >= 0")
        if elapsed == 0 and self.hold_left > 0:
            return self.p
        weights = [w for _, w in self.profile.levels]
        acc = 0.0
        remaining = elapsed
        while True:
            if self.hold_left <= 0:
                k = int(rng.choice(len(weights), p=weights))
                self.p = self.profile.levels[k][0]
                self.hold_left = rng.uniform(self.profile.hold_lo, self.profile.hold_hi)
            if remaining <= 0:
                break
            step = min(self.hold_left, remaining)
            acc += step * self.p
            self.hold_left -= step
            remaining -= step
        return acc / elapsed if elapsed > 0 else self.p

    def transmit(self, rng: np.random.Generator, n: int, p: Optional[float] = None) -> int:
        """Deliveries among n packets sent this RTT interval (iid Bernoulli);
        `p` overrides the instantaneous level, e.g. with a slot's mean."""
        if n < 0:
            raise ValueError("packet count must be >= 0")
        if n == 0:
            return 0
        prob = self.p if p is None else p
        if prob >= 1.0:
            return n
        return int(rng.binomial(n, prob))


def fresh_state(profile: ChannelProfile, rng: np.random.Generator) -> ChannelState:
    state = ChannelState(profile)
    state.evolve(rng, 0.0)
    return state
