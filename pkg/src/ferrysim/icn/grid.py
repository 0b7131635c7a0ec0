"""Full two-scale source-routed back-pressure (BP+SR) over multi-gateway
cluster topologies.

Composes the whole pipeline on the generic machinery: per-super-slot gateway
selection, overlay-to-chain threshold transfers at sources, gateway load
balancing through the cluster, MaxWeight intra-cluster scheduling, mobile
exchanges by overlay differentials with loop prevention, and destination-side
release.  Packets carry (created, chosen destination gateway, destination,
last gateway) headers.
"""

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Tuple

from ..bp.queues import PerDestQueues
from ..bp.scheduling import InterferenceModel, maxweight_schedule
from ..core.metrics import MetricsSink
from ..core.rng import SeededRng
from ..core.topology import TopologyGraph
from .mobility import MobileState
from .twoscale import (gateway_balance_commodity, loop_prevention_filter,
                       select_gateways, transfer_quota)


@dataclass
class GridFlow:
    source: str
    dest: str
    rate: float          # pkts/slot, Bernoulli arrivals


@dataclass
class GridBpsrResult:
    delivered: Dict[Tuple[str, str], int]
    created: Dict[Tuple[str, str], int]
    in_flight: int
    mean_inter_delay: float
    max_internal_type1: int
    max_source_overlay: int
    max_gateway_overlay: int
    max_mobile_overlay: int
    sink: MetricsSink = None


class GridBpsrSim:
    def __init__(self, topology: TopologyGraph, T: int, mobiles: List[MobileState],
                 inter_flows: List[GridFlow], intra_flows: List[GridFlow] = (),
                 eta: int = 10, seed: int = 1, run_id: str = "icn-grid"):
        self.topo = topology
        self.T = T
        self.eta = eta
        self.mobiles = {m.mobile_id: m for m in mobiles}
        for m in mobiles:
            if m.mobile_id not in topology.mobiles:
                raise ValueError("mobile %s not in topology" % m.mobile_id)
        self.inter_flows = list(inter_flows)
        self.intra_flows = list(intra_flows)
        self.rngs = SeededRng(seed)
        self.sink = MetricsSink(run_id)
        self.q = PerDestQueues()
        # overlays: u[(node, key)] -> FIFO of header tuples
        self.u: Dict[Tuple[str, str], deque] = {}
        self.all_gateways = sorted(g for gws in topology.gateways.values() for g in gws)
        self.gateway_cluster = {g: topology.cluster_of(g) for g in self.all_gateways}
        self.cluster_links = {c: topology.cluster_links(c) for c in topology.clusters}
        self.cluster_size = {c: len(topology.clusters[c]) for c in topology.clusters}
        self.model = InterferenceModel("node_exclusive", link_rate=topology.link_capacity)
        # per-cluster commodity lists for the scheduler
        self.commodities: Dict[str, List[str]] = {}
        for c in topology.clusters:
            coms = set(topology.gateways[c])
            for f in self.intra_flows:
                if topology.cluster_of(f.dest) == c:
                    coms.add(f.dest)
            for f in self.inter_flows:
                if topology.cluster_of(f.dest) == c:
                    coms.add(f.dest)
            self.commodities[c] = sorted(coms)
        self._arrival_rng = {(f.source, f.dest): self.rngs.stream("arrivals/%s-%s" % (f.source, f.dest))
                             for f in self.inter_flows + list(self.intra_flows)}
        self._mob_rng = {mid: self.rngs.stream("mobility/%s" % mid) for mid in self.mobiles}
        self.chosen: Dict[Tuple[str, str], Tuple[str, str]] = {}
        self.balance: Dict[Tuple[str, str], str] = {}
        self.created: Dict[Tuple[str, str], int] = {}
        self.delivered: Dict[Tuple[str, str], int] = {}
        self.inter_delays: List[int] = []
        self.max_internal_type1 = 0
        self.max_source_overlay = 0
        self.max_gateway_overlay = 0
        self.max_mobile_overlay = 0
        self._t = 0

    # -- overlay helpers -----------------------------------------------------

    def _uq(self, node: str, key: str) -> deque:
        fifo = self.u.get((node, key))
        if fifo is None:
            fifo = deque()
            self.u[(node, key)] = fifo
        return fifo

    def _ulen(self, node: str, key: str) -> int:
        fifo = self.u.get((node, key))
        return len(fifo) if fifo else 0

    def _u_table(self, node: str) -> Dict[str, int]:
        return {key: len(f) for (n, key), f in self.u.items() if n == node and f}

    # -- super-slot boundary ---------------------------------------------------

    def _super_slot(self):
        # mobiles move and exchange with the contacted gateways, in id order
        for mid in sorted(self.mobiles):
            mob = self.mobiles[mid]
            gateway = mob.step(self._mob_rng[mid])
            self._exchange(mid, gateway)
        # source routing: pick the gateway pair per inter flow
        for f in self.inter_flows:
            src_gws = self.topo.gateways[self.topo.cluster_of(f.source)]
            dst_gws = self.topo.gateways[self.topo.cluster_of(f.dest)]
            self.chosen[(f.source, f.dest)] = select_gateways(
                self._ulen, f.source, f.dest, src_gws, dst_gws)
        # gateway balancing commodities, fixed for the super slot
        for c, gws in self.topo.gateways.items():
            for g1 in gws:
                for g2 in gws:
                    if g1 == g2:
                        continue
                    l, diff = gateway_balance_commodity(
                        self._u_table(g1), self._u_table(g2),
                        [g for g in self.all_gateways if g != g1])
                    self.balance[(g1, g2)] = l if diff > 0 else None

    def _exchange(self, mid: str, gateway: str):
        budget = self.mobiles[mid].contact_budget

        def pick(a, b):
            best, best_diff = None, 0.0
            for j in sorted(self.all_gateways):
                diff = a.get(j, 0) - b.get(j, 0)
                if diff > best_diff:
                    best, best_diff = j, diff
            return best

        u_m = {j: self._eligible(mid, j, gateway) for j in self.all_gateways}
        u_g = {j: self._ulen(gateway, j) for j in self.all_gateways}
        up = pick(u_m, u_g)          # mobile -> gateway (drop-off)
        moved_up = 0
        if up is not None:
            moved_up = self._move_from_mobile(mid, up, gateway, min(budget, u_m[up]))
        down = pick(u_g, u_m)        # gateway -> mobile (pick-up)
        moved_down = 0
        if down is not None:
            src = self._uq(gateway, down)
            for _ in range(min(budget, len(src))):
                created, gd_star, dest, _last = src.popleft()
                self._uq(mid, down).append((created, gd_star, dest, gateway))
                moved_down += 1
        self.sink.record(self._t, "contact_pickup", "%s@%s" % (mid, gateway), moved_down)
        self.sink.record(self._t, "contact_dropoff", "%s@%s" % (mid, gateway), moved_up)

    def _eligible(self, mid: str, commodity: str, gateway: str) -> int:
        fifo = self.u.get((mid, commodity))
        if not fifo:
            return 0
        return sum(1 for (_, _, _, last) in fifo
                   if loop_prevention_filter(last, gateway))

    def _move_from_mobile(self, mid: str, commodity: str, gateway: str, count: int) -> int:
        fifo = self._uq(mid, commodity)
        moved, kept = 0, []
        while fifo and moved < count:
            pkt = fifo.popleft()
            created, gd_star, dest, last = pkt
            if not loop_prevention_filter(last, gateway):
                kept.append(pkt)
                continue
            moved += 1
            if gd_star == gateway:
                self._uq(gateway, dest).append((created, gd_star, dest, mid))
            else:
                self._uq(gateway, gd_star).append((created, gd_star, dest, mid))
        fifo.extendleft(reversed(kept))
        return moved

    # -- per-slot pieces -------------------------------------------------------

    def _arrivals(self, t: int):
        for f in self.inter_flows:
            if self._arrival_rng[(f.source, f.dest)].random() < f.rate:
                gs, gd = self.chosen[(f.source, f.dest)]
                self._uq(f.source, gs).append((t, gd, f.dest, None))
                self.created[(f.source, f.dest)] = self.created.get((f.source, f.dest), 0) + 1
        for f in self.intra_flows:
            if self._arrival_rng[(f.source, f.dest)].random() < f.rate:
                self.q.push(f.source, f.dest, (t, None, f.dest, None))
                self.created[(f.source, f.dest)] = self.created.get((f.source, f.dest), 0) + 1

    def _transfers(self):
        # sources: u_s^{g} -> q_s^{g} under the strict theta gate, every gateway
        for f in self.inter_flows:
            s = f.source
            cluster = self.topo.cluster_of(s)
            k_s = self.T / self.cluster_size[cluster]
            for g in self.topo.gateways[cluster]:
                quota = transfer_quota(self._ulen(s, g), self.q.length(s, g), k_s, self.eta)
                fifo = self.u.get((s, g))
                for _ in range(quota):
                    self.q.push(s, g, fifo.popleft())
        # gateway balancing: u_{g1}^{l} -> q_{g1}^{g2}
        for (g1, g2), l in self.balance.items():
            if l is None:
                continue
            cluster = self.gateway_cluster[g1]
            k = self.T / self.cluster_size[cluster]
            diff = self._ulen(g1, l) - self._ulen(g2, l)
            if diff <= 0:
                continue
            theta = diff / k
            if theta > self.q.length(g1, g2):
                fifo = self._uq(g1, l)
                for _ in range(min(self.eta, len(fifo))):
                    self.q.push(g1, g2, fifo.popleft())
        # destination gateways: u_{gd}^{d} -> q_{gd}^{d}
        for f in self.inter_flows:
            d = f.dest
            cluster = self.topo.cluster_of(d)
            k = self.T / self.cluster_size[cluster]
            for g in self.topo.gateways[cluster]:
                quota = transfer_quota(self._ulen(g, d), self.q.length(g, d), k, self.eta)
                fifo = self.u.get((g, d))
                for _ in range(quota):
                    self.q.push(g, d, fifo.popleft())

    def _schedule(self, t: int):
        for c in sorted(self.topo.clusters):
            plan = maxweight_schedule(self.q, self.cluster_links[c], self.model,
                                      commodities=self.commodities[c])
            for (link, commodity, pkts) in plan:
                a, b = link
                for pkt in self.q.pop(a, commodity, pkts):
                    self._receive(b, commodity, pkt, t)

    def _receive(self, node: str, commodity: str, pkt, t: int):
        created, gd_star, dest, last = pkt
        if node == commodity:
            if commodity in self.all_gateways:
                # reached a gateway: rejoin the overlay toward its next stage
                if gd_star == node:
                    self._uq(node, dest).append(pkt)
                else:
                    self._uq(node, gd_star).append(pkt)
            else:
                flow = self._flow_of(dest, created)
                self.delivered[flow] = self.delivered.get(flow, 0) + 1
                if gd_star is not None:
                    self.inter_delays.append(t - created)
        else:
            self.q.push(node, commodity, pkt)

    def _flow_of(self, dest: str, created: int) -> Tuple[str, str]:
        for f in self.inter_flows + list(self.intra_flows):
            if f.dest == dest:
                return (f.source, f.dest)
        return ("?", dest)

    def _observe(self):
        internal_max = 0
        for (node, _c), ln in self.q.nonzero():
            if node not in self.all_gateways:
                internal_max = max(internal_max, ln)
        self.max_internal_type1 = max(self.max_internal_type1, internal_max)
        for (node, key), fifo in self.u.items():
            ln = len(fifo)
            if node in self.mobiles:
                self.max_mobile_overlay = max(self.max_mobile_overlay, ln)
            elif node in self.all_gateways:
                self.max_gateway_overlay = max(self.max_gateway_overlay, ln)
            else:
                self.max_source_overlay = max(self.max_source_overlay, ln)

    def run(self, horizon: int) -> GridBpsrResult:
        for t in range(horizon):
            self._t = t
            if t % self.T == 0:
                self._super_slot()
                self._record(t)
            self._transfers()
            self._schedule(t)
            self._arrivals(t)
            if t % 50 == 0:
                self._observe()
        self._observe()
        in_flight = self.q.total() + sum(len(f) for f in self.u.values())
        delays = self.inter_delays
        return GridBpsrResult(
            delivered=dict(self.delivered), created=dict(self.created),
            in_flight=in_flight,
            mean_inter_delay=sum(delays) / len(delays) if delays else float("nan"),
            max_internal_type1=self.max_internal_type1,
            max_source_overlay=self.max_source_overlay,
            max_gateway_overlay=self.max_gateway_overlay,
            max_mobile_overlay=self.max_mobile_overlay,
            sink=self.sink)

    def _record(self, t: int):
        for g in self.all_gateways:
            total = sum(len(f) for (n, _), f in self.u.items() if n == g)
            self.sink.record(t, "overlay_len", g, total)
        for mid in sorted(self.mobiles):
            total = sum(len(f) for (n, _), f in self.u.items() if n == mid)
            self.sink.record(t, "overlay_len", mid, total)
