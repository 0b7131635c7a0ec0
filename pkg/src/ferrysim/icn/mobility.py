"""Markov mobility of the carrier nodes over their gateway contact lists."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np


class MobilityError(ValueError):
    pass


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Left eigenvector of P at eigenvalue 1, normalized to a distribution."""
    n = P.shape[0]
    A = np.vstack([P.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    return pi


@dataclass
class MobileState:
    mobile_id: str
    gateways: List[str]
    P: np.ndarray
    current: int = 0
    contact_budget: int = 1500          # R packets per contact direction
    pi: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        self.P = np.asarray(self.P, dtype=float)
        n = len(self.gateways)
        if self.P.shape != (n, n):
            raise MobilityError("transition matrix shape %s does not match %d gateways"
                                % (self.P.shape, n))
        if np.any(self.P < -1e-12) or np.any(np.abs(self.P.sum(axis=1) - 1.0) > 1e-9):
            raise MobilityError("rows of the mobility matrix must be distributions")
        if not self._irreducible():
            raise MobilityError("mobility chain must be irreducible")
        # deterministic shuttles are periodic yet legitimate contact patterns,
        # so aperiodicity is recorded rather than enforced
        self.aperiodic = self._primitive()
        if self.pi is None:
            self.pi = stationary_distribution(self.P)
        if np.max(np.abs(self.pi @ self.P - self.pi)) > 1e-9:
            raise MobilityError("stationary distribution check failed")

    def _irreducible(self) -> bool:
        n = self.P.shape[0]
        M = (self.P > 0)
        reach = np.eye(n, dtype=bool) | M
        for _ in range(n):
            reach = reach | (reach @ M)
        return bool(np.all(reach))

    def _primitive(self) -> bool:
        # irreducible + aperiodic iff some power of the pattern is all-positive
        # (Wielandt: the exponent is at most n^2 - 2n + 2)
        n = self.P.shape[0]
        if n == 1:
            return True
        M = (self.P > 0)
        power = M.copy()
        for _ in range(n * n - 2 * n + 2):
            if np.all(power):
                return True
            power = power @ M
        return bool(np.all(power))

    @property
    def gateway(self) -> str:
        return self.gateways[self.current]

    def step(self, rng) -> str:
        """Sample the next gateway from the current row; called once per super slot."""
        row = self.P[self.current]
        self.current = int(rng.choice(len(row), p=row))
        return self.gateway


def shuttle(mobile_id: str, g_a: str, g_b: str, contact_budget: int) -> MobileState:
    """Deterministic two-gateway shuttle (the test-network mobility)."""
    return MobileState(mobile_id, [g_a, g_b], np.array([[0.0, 1.0], [1.0, 0.0]]),
                       contact_budget=contact_budget)


def ring_chain(mobile_id: str, gateways: List[str], forward: float = 0.8,
               stay: float = 0.1, contact_budget: int = 1500,
               direction: int = 1) -> MobileState:
    """The simulation chain: advance around the ring w.p. `forward`, stay w.p.
    `stay`, step back with the remainder."""
    n = len(gateways)
    back = 1.0 - forward - stay
    if back < -1e-12:
        raise MobilityError("forward + stay must be <= 1")
    P = np.zeros((n, n))
    for i in range(n):
        P[i, (i + direction) % n] += forward
        P[i, i] += stay
        P[i, (i - direction) % n] += back
    return MobileState(mobile_id, gateways, P, contact_budget=contact_budget)
