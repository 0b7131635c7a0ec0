"""Reference LP for the min-cost mobility problem and a small dense simplex.

The bilinear pickup terms delta_{l,j} * f_j are linearized with the standard
substitution z_{l,j} = delta_{l,j} f_j, 0 <= z <= f, which makes both the
pickup and drop-off constraints linear.  The solver is a two-phase dense
simplex with Bland's rule, which terminates on these desk-scale instances
without any external dependency.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


# ---------------------------------------------------------------------------
# generic dense simplex: minimize c.x s.t. A_eq x = b_eq, A_ub x <= b_ub, x >= 0
# ---------------------------------------------------------------------------

_TOL = 1e-9


def _pivot(T: np.ndarray, basis: List[int], row: int, col: int) -> None:
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and abs(T[r, col]) > 0:
            T[r] -= T[r, col] * T[row]
    basis[row] = col


def _bland_simplex(T: np.ndarray, basis: List[int], ncols: int) -> None:
    """Run simplex to optimality on tableau T (last row = objective,
    last column = rhs), entering/leaving by Bland's rule."""
    m = T.shape[0] - 1
    while True:
        col = -1
        for j in range(ncols):
            if T[-1, j] < -_TOL:
                col = j
                break
        if col < 0:
            return
        row, best = -1, None
        for i in range(m):
            if T[i, col] > _TOL:
                ratio = T[i, -1] / T[i, col]
                if best is None or ratio < best - _TOL or \
                   (abs(ratio - best) <= _TOL and basis[i] < basis[row]):
                    row, best = i, ratio
        if row < 0:
            raise Unbounded("unbounded direction entering column %d" % col)
        _pivot(T, basis, row, col)


def simplex_solve(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None) -> Tuple[np.ndarray, float]:
    """Exact-over-floats LP solve; raises Infeasible/Unbounded."""
    c = np.asarray(c, dtype=float)
    n = c.size
    rows = []
    rhs = []
    kinds = []
    if A_ub is not None and len(A_ub):
        for row, b in zip(np.asarray(A_ub, dtype=float), np.asarray(b_ub, dtype=float)):
            rows.append(row)
            rhs.append(b)
            kinds.append("ub")
    if A_eq is not None and len(A_eq):
        for row, b in zip(np.asarray(A_eq, dtype=float), np.asarray(b_eq, dtype=float)):
            rows.append(row)
            rhs.append(b)
            kinds.append("eq")
    m = len(rows)
    n_slack = sum(1 for k in kinds if k == "ub")
    # columns: x | slacks | artificials | rhs
    A = np.zeros((m, n + n_slack + m))
    b = np.zeros(m)
    basis = [0] * m
    si = 0
    for i, (row, bi, kind) in enumerate(zip(rows, rhs, kinds)):
        sign = 1.0
        if bi < 0:
            sign = -1.0
        A[i, :n] = sign * row
        b[i] = sign * bi
        if kind == "ub":
            A[i, n + si] = sign * 1.0
            si += 1
        # artificial always present; redundant ones are priced out in phase 1
        A[i, n + n_slack + i] = 1.0
        basis[i] = n + n_slack + i
    total = n + n_slack + m
    # phase 1
    T = np.zeros((m + 1, total + 1))
    T[:m, :total] = A
    T[:m, -1] = b
    T[-1, n + n_slack:total] = 1.0
    for i in range(m):
        T[-1] -= T[i]
    _bland_simplex(T, basis, total)
    if T[-1, -1] < -1e-7:
        raise Infeasible("phase-1 optimum %.3e > 0" % -T[-1, -1])
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n + n_slack:
            for j in range(n + n_slack):
                if abs(T[i, j]) > _TOL:
                    _pivot(T, basis, i, j)
                    break
    # phase 2 on the real objective, artificial columns frozen
    T2 = np.zeros((m + 1, n + n_slack + 1))
    T2[:m, :n + n_slack] = T[:m, :n + n_slack]
    T2[:m, -1] = T[:m, -1]
    T2[-1, :n] = c
    for i in range(m):
        if basis[i] < n + n_slack:
            T2[-1] -= T2[-1, basis[i]] * T2[i]
    _bland_simplex(T2, basis, n + n_slack)
    x = np.zeros(n + n_slack)
    for i in range(m):
        if basis[i] < n + n_slack:
            x[basis[i]] = T2[i, -1]
    return x[:n], float(c @ x[:n])


# ---------------------------------------------------------------------------
# mobility problem construction
# ---------------------------------------------------------------------------

@dataclass
class Route:
    """A patrol option: which stationaries get contacted how often, how long
    the loop takes, what it costs, and its surveillance floor."""
    name: str
    visits: Dict[str, int]            # stationary -> contacts per patrol
    duration: float                   # T_j in slots
    cost: float = 0.0                 # b_j, per slot on the route
    floor: float = 0.0                # p_j

    def pickup_rate(self, l: str, eta_p: float) -> float:
        return eta_p * self.visits.get(l, 0) / self.duration

    def dropoff_rate(self, l: str, eta_d: float) -> float:
        return eta_d * self.visits.get(l, 0) / self.duration


@dataclass
class Flow:
    source: str
    dest: str
    rate: float                       # pkts/slot


@dataclass
class CostModel:
    pickup: Dict[Tuple[str, str], float] = field(default_factory=dict)  # (l, route) -> a_{l,j}
    K: float = 1.0
    kappa: Optional[float] = None     # defaults to eta_max / T_max

    def a(self, l: str, route: str) -> float:
        return self.pickup.get((l, route), 0.0)


def _lp_arrays(routes: List[Route], flows: List[Flow], costs: CostModel,
               eta_p: float, eta_d: float, forced_f: Optional[Dict[str, float]] = None):
    J = len(routes)
    zidx = [(f.source, j) for f in flows for j in range(J)
            if routes[j].pickup_rate(f.source, eta_p) > 0]
    nz = len(zidx)
    n = J + nz
    dests = sorted({f.dest for f in flows})
    c = np.zeros(n)
    for j, r in enumerate(routes):
        c[j] = costs.K * r.cost
    for k, (l, j) in enumerate(zidx):
        c[J + k] = costs.K * costs.a(l, routes[j].name) * routes[j].pickup_rate(l, eta_p)
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    for f in flows:
        row = np.zeros(n)
        for k, (l, j) in enumerate(zidx):
            if l == f.source:
                row[J + k] = routes[j].pickup_rate(l, eta_p)
        A_eq.append(row)
        b_eq.append(f.rate)
    for k, (l, j) in enumerate(zidx):      # z <= f
        row = np.zeros(n)
        row[J + k] = 1.0
        row[j] = -1.0
        A_ub.append(row)
        b_ub.append(0.0)
    row = np.zeros(n)                      # sum f <= 1
    row[:J] = 1.0
    A_ub.append(row)
    b_ub.append(1.0)
    for j, r in enumerate(routes):         # f_j >= p_j
        if r.floor > 0:
            row = np.zeros(n)
            row[j] = -1.0
            A_ub.append(row)
            b_ub.append(-r.floor)
    for d in dests:                        # drop-off capacity per destination
        row = np.zeros(n)
        for k, (l, j) in enumerate(zidx):
            if any(f.source == l and f.dest == d for f in flows):
                row[J + k] += routes[j].pickup_rate(l, eta_p)
        for j, r in enumerate(routes):
            row[j] -= r.dropoff_rate(d, eta_d)
        A_ub.append(row)
        b_ub.append(0.0)
    if forced_f:
        for j, r in enumerate(routes):
            if r.name in forced_f:
                row = np.zeros(n)
                row[j] = 1.0
                A_eq.append(row)
                b_eq.append(forced_f[r.name])
    return c, A_ub, b_ub, A_eq, b_eq, zidx


def reference_lp_solve(routes: List[Route], flows: List[Flow], costs: CostModel,
                       eta_p: float, eta_d: float,
                       forced_f: Optional[Dict[str, float]] = None):
    """Optimal (f, y, cost) of the min-cost mobility program; y maps
    (source, route name) -> pick-up rate.  Raises Infeasible.

    Symmetric instances leave a degenerate optimal face; among cost-optimal
    points the solver then minimizes the largest single priced pickup rate,
    which canonicalizes the answer to the face's balanced point (the one an
    interior-point solver reports).
    """
    c, A_ub, b_ub, A_eq, b_eq, zidx = _lp_arrays(routes, flows, costs, eta_p, eta_d, forced_f)
    x, cost = simplex_solve(c, A_ub, b_ub, A_eq, b_eq)
    J = len(routes)
    priced = [k for k, (l, j) in enumerate(zidx)
              if costs.a(l, routes[j].name) > 0 and c[J + k] > 0]
    if priced:
        n = c.size
        c2 = np.zeros(n + 1)
        c2[n] = 1.0
        A_ub2 = [np.concatenate([row, [0.0]]) for row in A_ub]
        b_ub2 = list(b_ub)
        A_ub2.append(np.concatenate([c, [0.0]]))          # keep the cost optimal
        b_ub2.append(cost + 1e-9 * max(1.0, abs(cost)))
        for k in priced:                                   # priced pickup <= s
            row = np.zeros(n + 1)
            row[J + k] = c[J + k] / costs.K
            row[n] = -1.0
            A_ub2.append(row)
            b_ub2.append(0.0)
        A_eq2 = [np.concatenate([row, [0.0]]) for row in A_eq]
        x2, _ = simplex_solve(c2, A_ub2, b_ub2, A_eq2, b_eq)
        x = x2[:n]
    f = {r.name: float(x[j]) for j, r in enumerate(routes)}
    y = {}
    for k, (l, j) in enumerate(zidx):
        y[(l, routes[j].name)] = float(x[J + k]) * routes[j].pickup_rate(l, eta_p)
    return f, y, cost


def supportability_check(routes: List[Route], flows: List[Flow],
                         eta_p: float, eta_d: float,
                         forced_f: Optional[Dict[str, float]] = None) -> bool:
    """LP feasibility of the capacity region (phase 1 only)."""
    costs = CostModel(K=1.0)
    c, A_ub, b_ub, A_eq, b_eq, _ = _lp_arrays(routes, flows, costs, eta_p, eta_d, forced_f)
    try:
        simplex_solve(np.zeros_like(c), A_ub, b_ub, A_eq, b_eq)
        return True
    except Infeasible:
        return False
