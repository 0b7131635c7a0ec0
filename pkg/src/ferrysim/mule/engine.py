"""Selection-by-selection simulation of the mobility controller.

Each iteration is one route selection; arrivals accrue over the route's
duration at unit-packet granularity, the controller equations run at the
selection boundary, and everything is measured in slots internally (pkts/min
scenarios are converted with slots_per_min).
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..core.metrics import MetricsSink
from ..core.rng import SeededRng
from .control import (ControllerState, pickup_decision, practical_sync,
                      route_score, select_route, stationary_enqueue,
                      update_deficit, update_queues)
from .lp import CostModel, Flow, Route


@dataclass
class MuleResult:
    selections: int
    elapsed: float                                  # slots
    splits: Dict[Tuple[str, str], float]            # (source, route) -> pkts/slot admitted
    f: Dict[str, float]                             # route time fractions
    picked: Dict[Tuple[str, str], float]            # physical pickups per (source, route)
    delivered: Dict[str, float]
    created: Dict[str, float]
    max_q: float
    max_Q: float
    max_w: float
    avg_cost_rate: float                            # time-average of the K-scaled objective
    sink: MetricsSink = None


class MuleSim:
    def __init__(self, routes: List[Route], flows: List[Flow], costs: CostModel,
                 eta_p: float, eta_d: float, kappa: Optional[float] = None,
                 variant: str = "practical", forced_cycle: Optional[List[str]] = None,
                 arrivals: str = "poisson", seed: int = 3,
                 run_id: str = "mule", record_every: int = 10):
        if variant not in ("exact", "practical"):
            raise ValueError("variant must be exact or practical")
        if arrivals not in ("poisson", "fluid"):
            raise ValueError("arrivals must be poisson or fluid")
        sources = [f.source for f in flows]
        if len(set(sources)) != len(sources):
            raise ValueError("one flow per source stationary")
        self.routes, self.flows, self.costs = routes, flows, costs
        self.eta_p, self.eta_d = eta_p, eta_d
        eta_max = max(max(n * max(eta_p, eta_d) for n in r.visits.values())
                      for r in routes if r.visits)
        t_max = max(r.duration for r in routes)
        self.kappa = kappa if kappa is not None else eta_max / t_max
        self.variant = variant
        self.forced_cycle = forced_cycle
        self.record_every = record_every
        self.state = ControllerState()
        self.sink = MetricsSink(run_id)
        self.elapsed = 0.0
        self.admitted: Dict[Tuple[str, str], float] = {}
        self.picked: Dict[Tuple[str, str], float] = {}
        self.delivered: Dict[str, float] = {}
        self.created: Dict[str, float] = {}
        self.route_time: Dict[str, float] = {r.name: 0.0 for r in routes}
        self.cost_accum = 0.0
        self.max_q = self.max_Q = self.max_w = 0.0
        self._carry: Dict[str, float] = {f.source: 0.0 for f in flows}
        self.arrivals = arrivals
        rngs = SeededRng(seed)
        self._arrival_rng = {f.source: rngs.stream("arrivals/%s" % f.source)
                             for f in flows}

    def _arrival_count(self, flow: Flow, duration: float) -> int:
        if self.arrivals == "poisson":
            return int(self._arrival_rng[flow.source].poisson(flow.rate * duration))
        amount = flow.rate * duration + self._carry[flow.source]
        whole = int(amount)
        self._carry[flow.source] = amount - whole
        return whole

    def _deposit_arrivals(self, duration: float) -> None:
        """Unit-packet deposits: each new packet goes to the currently
        cheapest queue (K a + q), mirroring the per-packet practical rule."""
        for f in self.flows:
            whole = self._arrival_count(f, duration)
            self.created[f.source] = self.created.get(f.source, 0.0) + whole
            for _ in range(whole):
                chosen = stationary_enqueue(self.state, f.source, self.routes,
                                            self.costs, self.eta_p, 1.0)
                key = (f.source, chosen)
                self.admitted[key] = self.admitted.get(key, 0.0) + 1.0

    def _deposit_arrivals_exact(self, duration: float) -> None:
        """The idealized rule: the whole T(k) x_l batch enters the queue that
        was cheapest at selection time."""
        for f in self.flows:
            chosen = stationary_enqueue(self.state, f.source, self.routes,
                                        self.costs, self.eta_p, 0.0)
            amount = float(self._arrival_count(f, duration))
            key = (f.source, chosen)
            self.state.q[key] = self.state.q.get(key, 0.0) + amount
            self.created[f.source] = self.created.get(f.source, 0.0) + amount
            self.admitted[key] = self.admitted.get(key, 0.0) + amount

    def step(self) -> Route:
        k = self.state.k
        if self.forced_cycle:
            name = self.forced_cycle[k % len(self.forced_cycle)]
            chosen = next(r for r in self.routes if r.name == name)
        else:
            chosen = select_route(self.state, self.routes, self.flows, self.costs,
                                  self.kappa, self.eta_p, self.eta_d,
                                  stale=(self.variant == "practical"))
        score_at_selection = route_score(self.state, chosen, self.flows, self.costs,
                                         self.kappa, self.eta_p, self.eta_d,
                                         stale=(self.variant == "practical"))
        deltas = {}
        for f in self.flows:
            P = chosen.pickup_rate(f.source, self.eta_p)
            q_val = (self.state.seen_q(f.source, chosen.name)
                     if self.variant == "practical"
                     else self.state.q_at(f.source, chosen.name))
            deltas[f.source] = pickup_decision(q_val, self.state.Q.get(f.dest, 0.0), P)
        if self.variant == "practical":
            self._deposit_arrivals(chosen.duration)
        else:
            self._deposit_arrivals_exact(chosen.duration)
        picked, dropped = update_queues(self.state, chosen, self.flows, deltas,
                                        self.eta_p, self.eta_d)
        for l, amount in picked.items():
            key = (l, chosen.name)
            self.picked[key] = self.picked.get(key, 0.0) + amount
        for d, amount in dropped.items():
            self.delivered[d] = self.delivered.get(d, 0.0) + amount
        update_deficit(self.state, self.routes, chosen)
        if self.variant == "practical":
            practical_sync(self.state, chosen, self.flows, self.eta_p)
        self.route_time[chosen.name] += chosen.duration
        self.elapsed += chosen.duration
        step_cost = self.costs.K * chosen.cost * chosen.duration
        for l, amount in picked.items():
            step_cost += self.costs.K * self.costs.a(l, chosen.name) * amount
        self.cost_accum += step_cost
        if self.state.q:
            self.max_q = max(self.max_q, max(self.state.q.values()))
        if self.state.Q:
            self.max_Q = max(self.max_Q, max(self.state.Q.values()))
        if self.state.w:
            self.max_w = max(self.max_w, max(self.state.w.values()))
        if k % self.record_every == 0:
            t = int(self.elapsed)
            self.sink.record(t, "route", chosen.name, k)
            self.sink.record(t, "route_duration", chosen.name, chosen.duration)
            self.sink.record(t, "selection_objective", chosen.name, score_at_selection)
            for (l, rname), val in sorted(self.state.q.items()):
                self.sink.record(t, "stat_queue", "%s@%s" % (l, rname), val)
            for d, val in sorted(self.state.Q.items()):
                self.sink.record(t, "mobile_queue", d, val)
            for rname, val in sorted(self.state.w.items()):
                self.sink.record(t, "deficit", rname, val)
            for (l, rname), val in sorted(self.admitted.items()):
                self.sink.record(t, "split_avg", "%s@%s" % (l, rname),
                                 val / self.elapsed)
        self.state.k += 1
        return chosen

    def run(self, min_slots: float, warmup_fraction: float = 0.0) -> MuleResult:
        """Run until at least `min_slots` have elapsed; splits are measured
        after the warm-up fraction of that horizon."""
        warm_slots = min_slots * warmup_fraction
        warm_admitted: Dict[Tuple[str, str], float] = {}
        warm_time: Dict[str, float] = {}
        warm_elapsed = 0.0
        warmed = warmup_fraction <= 0
        while self.elapsed < min_slots:
            self.step()
            if not warmed and self.elapsed >= warm_slots:
                warm_admitted = dict(self.admitted)
                warm_time = dict(self.route_time)
                warm_elapsed = self.elapsed
                warmed = True
        window = self.elapsed - warm_elapsed
        splits = {key: (val - warm_admitted.get(key, 0.0)) / window
                  for key, val in self.admitted.items()}
        f = {name: (t - warm_time.get(name, 0.0)) / window
             for name, t in self.route_time.items()}
        return MuleResult(
            selections=self.state.k, elapsed=self.elapsed, splits=splits, f=f,
            picked=dict(self.picked), delivered=dict(self.delivered),
            created=dict(self.created), max_q=self.max_q, max_Q=self.max_Q,
            max_w=self.max_w,
            avg_cost_rate=self.cost_accum / self.elapsed if self.elapsed else 0.0,
            sink=self.sink)
