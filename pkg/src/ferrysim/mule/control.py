"""Online min-cost mobility control: dual-decomposition route selection with
deficit counters, and the stale-information practical variant."""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .lp import CostModel, Flow, Route


class NoReachableRoute(ValueError):
    pass


@dataclass
class ControllerState:
    """Queues, counters and (for the practical variant) the mobile's stale
    view of the stationary queues.  q doubles as the physical queue; Q keeps
    the dual iterate while Q_phys tracks packets actually on the mobile."""
    q: Dict[Tuple[str, str], float] = field(default_factory=dict)
    Q: Dict[str, float] = field(default_factory=dict)
    Q_phys: Dict[str, float] = field(default_factory=dict)
    w: Dict[str, float] = field(default_factory=dict)
    k: int = 0
    snapshot: Dict[Tuple[str, str], Tuple[float, int]] = field(default_factory=dict)

    def q_at(self, l: str, route: str) -> float:
        return self.q.get((l, route), 0.0)

    def seen_q(self, l: str, route: str) -> float:
        return self.snapshot.get((l, route), (0.0, -1))[0]


def stationary_enqueue(state: ControllerState, l: str, routes: List[Route],
                       costs: CostModel, eta_p: float, amount: float) -> str:
    """Deposit `amount` packets into argmin_j (K a_{l,j} + q_{l,j}) among the
    routes that can actually pick up from l; ties to the first route."""
    best, best_cost = None, None
    for r in routes:
        if r.pickup_rate(l, eta_p) <= 0:
            continue
        cost = costs.K * costs.a(l, r.name) + state.q_at(l, r.name)
        if best_cost is None or cost < best_cost:
            best, best_cost = r.name, cost
    if best is None:
        raise NoReachableRoute("stationary %s is visited by no route" % l)
    state.q[(l, best)] = state.q_at(l, best) + amount
    return best


def pickup_decision(q_lj: float, Q_dest: float, pickup_rate: float) -> int:
    """1 iff the route reaches l and the stationary backlog beats the
    mobile's backlog for l's destination (strict)."""
    return 1 if pickup_rate > 0 and q_lj - Q_dest > 0 else 0


def route_score(state: ControllerState, route: Route, flows: List[Flow],
                costs: CostModel, kappa: float, eta_p: float, eta_d: float,
                stale: bool) -> float:
    """The route-selection objective: pickup pressure + drop-off relief +
    deficit pull - K-scaled route cost."""
    score = -costs.K * route.cost * 1.0
    dests = sorted({f.dest for f in flows})
    drop_relief = {d: route.dropoff_rate(d, eta_d) for d in dests}
    for f in flows:
        P = route.pickup_rate(f.source, eta_p)
        if P <= 0:
            continue
        q_val = state.seen_q(f.source, route.name) if stale else state.q_at(f.source, route.name)
        delta = pickup_decision(q_val, state.Q.get(f.dest, 0.0), P)
        if delta:
            score += q_val * P
            drop_relief[f.dest] -= P
    for d in dests:
        score += state.Q.get(d, 0.0) * drop_relief[d]
    score += kappa * state.w.get(route.name, 0.0) * (1.0 - route.floor)
    return score


def select_route(state: ControllerState, routes: List[Route], flows: List[Flow],
                 costs: CostModel, kappa: float, eta_p: float, eta_d: float,
                 stale: bool = False) -> Route:
    """argmax of route_score; ties go to the earliest route in the catalog."""
    if not routes:
        raise NoReachableRoute("empty route catalog")
    best, best_score = None, None
    for r in routes:
        s = route_score(state, r, flows, costs, kappa, eta_p, eta_d, stale)
        if best_score is None or s > best_score + 1e-12:
            best, best_score = r, s
    return best


def update_queues(state: ControllerState, chosen: Route, flows: List[Flow],
                  deltas: Dict[str, int], eta_p: float, eta_d: float
                  ) -> Tuple[Dict[str, float], Dict[str, float]]:
    """Apply the per-selection queue recursions for the patrolled route and
    move physical packets under the per-contact budgets.  Arrivals must have
    been deposited already; returns (physical pickups per source, physical
    drop-offs per destination)."""
    T = chosen.duration
    picked_phys: Dict[str, float] = {}
    incoming: Dict[str, float] = {}
    dropped_phys: Dict[str, float] = {}
    for f in flows:
        P = chosen.pickup_rate(f.source, eta_p)
        if P <= 0 or not deltas.get(f.source):
            continue
        key = (f.source, chosen.name)
        avail = state.q.get(key, 0.0)
        lift = min(avail, T * P)                       # zeta * eta_p physical cap
        state.q[key] = avail - lift if avail - lift > 1e-12 else 0.0
        picked_phys[f.source] = lift
        incoming[f.dest] = incoming.get(f.dest, 0.0) + lift
        # dual iterate counts the full pickup budget, projected at zero below
        state.Q[f.dest] = state.Q.get(f.dest, 0.0) + T * P
    for d in sorted({f.dest for f in flows}):
        drop_budget = chosen.dropoff_rate(d, eta_d) * T
        state.Q[d] = max(0.0, state.Q.get(d, 0.0) - drop_budget)
        phys = state.Q_phys.get(d, 0.0)
        dropped = min(phys, drop_budget)
        if dropped:
            dropped_phys[d] = dropped
        state.Q_phys[d] = phys - dropped + incoming.get(d, 0.0)
    return picked_phys, dropped_phys


def update_deficit(state: ControllerState, routes: List[Route], chosen: Route) -> None:
    """w_j <- [w_j + T(k) p_j - 1{chosen} T(k)]^+ for every route."""
    T = chosen.duration
    for r in routes:
        w = state.w.get(r.name, 0.0) + T * r.floor - (T if r.name == chosen.name else 0.0)
        state.w[r.name] = max(0.0, w)


def practical_sync(state: ControllerState, chosen: Route, flows: List[Flow],
                   eta_p: float) -> None:
    """At the end of each contact the mobile copies the stationary's true
    per-route queue sizes; last writer wins."""
    for f in flows:
        if chosen.pickup_rate(f.source, eta_p) > 0:
            for key in [k for k in state.q if k[0] == f.source]:
                state.snapshot[key] = (state.q[key], state.k)
