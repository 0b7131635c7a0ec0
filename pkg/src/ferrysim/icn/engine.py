"""ICN simulators.

LineDelaySim: the directed-line pickup-delay experiment (traditional BP vs
BP+SR) at a fixed source rate, with full-duplex unit-capacity links and a
mobile that shuttles between the two gateways every T slots.

TwoScaleRcSim: the test-network rate-control experiment (two-scale BP with
scaled gateway advertisement vs traditional BP), with optional shadow
packets, node-exclusive MaxWeight inside the clusters, and utility sources.
"""

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..bp.ratecontrol import UtilityFlow, rate_control_step, rate_estimate_update
from ..core.metrics import MetricsSink
from ..core.rng import SeededRng
from ..core.topology import TopologyGraph, build_line
from .shadow import ShadowQueuePair, shadow_serve


# ---------------------------------------------------------------------------
# Line delay experiment (the buffer-usage lemma setting)
# ---------------------------------------------------------------------------

@dataclass
class LineDelayResult:
    mode: str
    n_c: int
    T: int
    picked: int
    mean_pickup_delay: float
    delays: List[Tuple[int, int]]              # (creation slot, delay at pickup)
    max_type1: Dict[int, int]                  # hop index -> max q_i over the run
    max_u_source: int
    max_u_gateway: int
    max_u_mobile: int
    hop_bound_violations: int
    created: int
    delivered: int
    in_flight: int
    sink: MetricsSink = None


class LineDelaySim:
    """Directed line cluster (source at hop N_c, gateway at hop 1) feeding a
    mobile that alternates gateways every T slots with budget R per contact;
    source-gateway contacts happen at t = 2T, 4T, ... and drop-offs between.

    mode "bp":   per-destination queues everywhere; a link serves one packet
                 on a positive differential (capacity 1, full duplex).
    mode "bpsr": overlay queue at the source (u_s), type-I relay chain for
                 the gateway commodity, overlays at both gateways, strict
                 eta-threshold transfers with K_s = T/N_c.
    """

    def __init__(self, n_c: int, T: int, gamma: float, mode: str, seed: int = 1,
                 right: int = 3, eta: int = 1, contact_budget: Optional[int] = None,
                 run_id: str = "icn-line"):
        if n_c < 2:
            raise ValueError("need N_c >= 2")
        if mode not in ("bp", "bpsr"):
            raise ValueError("mode must be bp or bpsr")
        self.n_c, self.T, self.gamma, self.mode = n_c, T, gamma, mode
        self.right = max(2, right)
        self.eta = eta
        self.R = contact_budget if contact_budget is not None else 2 * T
        self.rng = SeededRng(seed).stream("line-arrivals")
        self.sink = MetricsSink(run_id)
        # the hop chains come from the shared topology model: the left chain
        # ends at its gateway (hop 1), the right chain starts at its gateway
        self.topology: TopologyGraph = build_line(n_c, self.right, mobiles=1)
        left_chain = self.topology.clusters["C1"]
        right_chain = self.topology.clusters["C2"]
        # left[i] for hop i: 1 = source gateway, n_c = source node
        self.left = [deque() for _ in range(len(left_chain) + 1)]
        # right_q[i]: 1 = destination gateway ... right = destination
        self.right_q = [deque() for _ in range(len(right_chain) + 1)]
        self.u_src: deque = deque()        # bpsr: source overlay u_s^{g_s}
        self.u_gw: deque = deque()         # bpsr: source gateway overlay u_{g_s}^{g_d}
        self.u_gw_dst: deque = deque()     # bpsr: dest gateway overlay u_{g_d}^{d}
        self.mobile: deque = deque()
        self.k_s = T / n_c
        self.k_gd = T / self.right
        self.picked: List[Tuple[int, int]] = []
        self.created = 0
        self.delivered = 0
        self.max_type1 = {i: 0 for i in range(2, n_c + 1)}
        self.max_u_source = 0
        self.max_u_gateway = 0
        self.max_u_mobile = 0
        self.hop_bound_violations = 0

    def run(self, horizon: int) -> LineDelayResult:
        for t in range(horizon):
            if t % self.T == 0:
                self._contact(t)
                self._record(t)
            if self.mode == "bp":
                self._slot_bp()
            else:
                self._slot_bpsr()
            self._observe()
            if self.rng.random() < 1.0 - self.gamma:
                self.created += 1
                if self.mode == "bp":
                    self.left[self.n_c].append(t)
                else:
                    self.u_src.append(t)
        delays = [d for (_, d) in self.picked]
        mean_delay = sum(delays) / len(delays) if delays else float("nan")
        in_flight = (sum(len(q) for q in self.left) + sum(len(q) for q in self.right_q)
                     + len(self.u_src) + len(self.u_gw) + len(self.u_gw_dst)
                     + len(self.mobile))
        return LineDelayResult(
            mode=self.mode, n_c=self.n_c, T=self.T, picked=len(self.picked),
            mean_pickup_delay=mean_delay, delays=self.picked,
            max_type1=dict(self.max_type1), max_u_source=self.max_u_source,
            max_u_gateway=self.max_u_gateway, max_u_mobile=self.max_u_mobile,
            hop_bound_violations=self.hop_bound_violations,
            created=self.created, delivered=self.delivered, in_flight=in_flight,
            sink=self.sink)

    def _contact(self, t: int):
        tau = t // self.T
        if tau == 0:
            return
        gw_q = self.left[1] if self.mode == "bp" else self.u_gw
        if tau % 2 == 0:
            # source-gateway contact: pick up on positive differential; the
            # mobile never pushes packets back toward their source gateway
            # (loop prevention / directed analysis links)
            if len(gw_q) > len(self.mobile):
                for _ in range(min(self.R, len(gw_q))):
                    created = gw_q.popleft()
                    self.picked.append((created, t - created))
                    self.mobile.append(created)
        else:
            drop_q = self.right_q[1] if self.mode == "bp" else self.u_gw_dst
            if len(self.mobile) > len(drop_q):
                for _ in range(min(self.R, len(self.mobile))):
                    drop_q.append(self.mobile.popleft())

    def _record(self, t: int) -> None:
        s = self.sink
        gw = len(self.left[1]) if self.mode == "bp" else len(self.u_gw)
        s.record(t, "queue_len", "gateway", gw)
        s.record(t, "queue_len", "mobile", len(self.mobile))
        if self.mode == "bpsr":
            s.record(t, "queue_len", "u_source", len(self.u_src))
        s.record(t, "picked_cum", "flow", len(self.picked))

    def _serve_left_chain(self, to_gateway_overlay: bool):
        lens = [len(q) for q in self.left]
        moves = [i for i in range(2, self.n_c + 1) if lens[i] - lens[i - 1] > 0]
        for i in moves:
            pkt = self.left[i].popleft()
            if i == 2 and to_gateway_overlay:
                self.u_gw.append(pkt)   # q at the gateway is the zero queue
            else:
                self.left[i - 1].append(pkt)

    def _serve_right_chain(self):
        lens = [len(q) for q in self.right_q]
        moves = [i for i in range(1, self.right) if lens[i] - lens[i + 1] > 0]
        for i in moves:
            self.right_q[i + 1].append(self.right_q[i].popleft())
        if self.right_q[self.right]:
            self.delivered += len(self.right_q[self.right])
            self.right_q[self.right].clear()

    def _slot_bp(self):
        self._serve_left_chain(to_gateway_overlay=False)
        self._serve_right_chain()

    def _slot_bpsr(self):
        self._serve_left_chain(to_gateway_overlay=True)
        # overlay gates: strict thresholds on current u against current q,
        # at most eta insertions per slot
        if len(self.u_src) / self.k_s > len(self.left[self.n_c]):
            for _ in range(min(self.eta, len(self.u_src))):
                self.left[self.n_c].append(self.u_src.popleft())
        if len(self.u_gw_dst) / self.k_gd > len(self.right_q[1]):
            for _ in range(min(self.eta, len(self.u_gw_dst))):
                self.right_q[1].append(self.u_gw_dst.popleft())
        self._serve_right_chain()

    def _observe(self):
        for i in range(2, self.n_c + 1):
            ln = len(self.left[i])
            if ln > self.max_type1[i]:
                self.max_type1[i] = ln
            if self.mode == "bpsr" and ln >= i:
                self.hop_bound_violations += 1
        if self.mode == "bpsr":
            if len(self.u_src) > self.max_u_source:
                self.max_u_source = len(self.u_src)
            if len(self.u_gw) > self.max_u_gateway:
                self.max_u_gateway = len(self.u_gw)
        elif len(self.left[1]) > self.max_u_gateway:
            self.max_u_gateway = len(self.left[1])
        if len(self.mobile) > self.max_u_mobile:
            self.max_u_mobile = len(self.mobile)


# ---------------------------------------------------------------------------
# Two-cluster rate-control experiment (test network)
# ---------------------------------------------------------------------------

BLUE, RED = 0, 1
INTER, INTRA = 0, 1


@dataclass
class TwoScaleResult:
    mode: str
    shadow_blues_per_red: int
    inter_rate: float                  # admissions/slot over the window, all colors
    intra_rate: float
    inter_data_rate: float             # blue admissions/slot over the window
    mean_inter_delay: float            # blue packets, creation -> delivery
    mean_intra_delay: float
    delivered_inter_blue: int
    admitted_inter: int
    useful_fraction: float             # delivered blue / admitted inter (whole run)
    max_internal_queue: int
    max_gateway_overlay: int
    sink: MetricsSink = None


class TwoScaleRcSim:
    """One inter-cluster utility flow (1.100 -> 2.100) against one intra flow
    (2.101 -> 2.100) on the two-cluster line network; the right cluster's two
    node-exclusive links (2.103-2.101, 2.101-2.100) are the only bottleneck.

    mode "two_scale": gateways keep raw overlay backlogs hq, advertise hq/T,
    and the destination gateway releases eta packets per slot through the
    non-strict gate hq/T >= q.  mode "bp": one per-destination queue per node
    (mobile included), so the intermittent link leaks into the rate signal.
    """

    def __init__(self, K1: float, K2: float, T: int, mode: str = "two_scale",
                 seed: int = 7, beta: float = 0.15, kappa: int = 3, eta: int = 3,
                 contact_budget: Optional[int] = None, shadow_blues_per_red: int = 0,
                 rate_unit: float = 100.0, run_id: str = "two-scale",
                 record_every: int = 500):
        if mode not in ("two_scale", "bp"):
            raise ValueError("mode must be two_scale or bp")
        self.T, self.mode = T, mode
        self.eta = eta
        self.R = contact_budget if contact_budget is not None else T
        self.blues_per_red = shadow_blues_per_red       # 0 = shadow off
        self.rate_unit = rate_unit
        self.record_every = record_every
        self.sink = MetricsSink(run_id)
        # the fixed experiment network, validated by the topology model
        self.topology: TopologyGraph = build_line(2, 3, mobiles=1)
        links = set(self.topology.links) | self.topology.contact_pairs()
        for pair in (("1.100", "1.104"), ("2.103", "2.101"), ("2.101", "2.100"),
                     ("0.100", "1.104"), ("0.100", "2.103")):
            if pair not in links:
                raise ValueError("experiment link %s missing from topology" % (pair,))
        self.inter = UtilityFlow("1.100", "2.100", K=K1, kappa=kappa, beta=beta)
        self.intra = UtilityFlow("2.101", "2.100", K=K2, kappa=kappa, beta=beta)
        # type-I queues; packets are (created_t, color, flow)
        self.q: Dict[Tuple[str, str], deque] = {
            ("1.100", "2.100"): deque(),
            ("2.103", "2.100"): deque(),
            ("2.101", "2.100"): deque(),
        }
        # overlay backlogs for the inter destination (blue FIFO + red count)
        self.hq: Dict[str, ShadowQueuePair] = {
            "1.104": ShadowQueuePair(), "0.100": ShadowQueuePair(),
            "2.103": ShadowQueuePair(),
        }
        if mode == "bp":
            self.q[("1.104", "2.100")] = deque()
            self.q[("0.100", "2.100")] = deque()
        self.mobile_at = "2.103"
        self.admitted_inter = 0
        self.admitted_intra = 0
        self.admitted_inter_window = 0
        self.admitted_blue_window = 0
        self.admitted_intra_window = 0
        self.delivered_inter_blue = 0
        self.delivered_inter_red = 0
        self.delivered_intra = 0
        self.inter_delays: List[int] = []
        self.intra_delays: List[int] = []
        self._color_cycle = 0
        self.max_internal_queue = 0
        self.max_gateway_overlay = 0
        self._t = 0
        self._measure_from = 0

    # -- queue lengths as the scheduler sees them ---------------------------

    def _len(self, node: str, commodity: str) -> float:
        q = self.q.get((node, commodity))
        base = len(q) if q else 0
        if self.mode == "two_scale" and node == "1.104":
            return len(self.hq["1.104"]) / self.T
        return base

    def _deliver(self, pkt) -> None:
        created, color, flow = pkt
        if flow == INTRA:
            self.delivered_intra += 1
            if self._t >= self._measure_from:
                self.intra_delays.append(self._t - created)
        elif color == BLUE:
            self.delivered_inter_blue += 1
            if self._t >= self._measure_from:
                self.inter_delays.append(self._t - created)
        else:
            self.delivered_inter_red += 1

    def _serve_link(self, a: str, b: str) -> None:
        qa = self.q.get((a, "2.100"))
        if not qa:
            return
        pkt = qa.popleft()
        if b == "2.100":
            self._deliver(pkt)
        elif self.mode == "two_scale" and b == "1.104":
            self._push_overlay("1.104", pkt)
        else:
            self.q[(b, "2.100")].append(pkt)

    def _push_overlay(self, node: str, pkt) -> None:
        if pkt[1] == RED:
            self.hq[node].push_red()
        else:
            self.hq[node].push_blue(pkt)

    # -- slot pieces ---------------------------------------------------------

    def _admit(self, flow: UtilityFlow, key: Tuple[str, str], flow_id: int,
               shadow: bool) -> Tuple[int, int]:
        admitted = rate_control_step(flow, self._len(*key))
        blues = 0
        if admitted:
            q = self.q[key]
            for _ in range(admitted):
                color = BLUE
                if shadow and self.blues_per_red:
                    self._color_cycle += 1
                    if self._color_cycle % (self.blues_per_red + 1) == 0:
                        color = RED
                blues += color == BLUE
                q.append((self._t, color, flow_id))
        flow.x = rate_estimate_update(flow.x, admitted, 1.0, unit=self.rate_unit)
        return admitted, blues

    def _contact(self) -> None:
        self.mobile_at = "1.104" if self.mobile_at == "2.103" else "2.103"
        g = self.mobile_at
        up = down = 0
        if self.mode == "two_scale":
            m_pair, g_pair = self.hq["0.100"], self.hq[g]
            if g == "1.104":
                # only pick-ups here: mobile packets all came from this gateway
                if len(g_pair) > len(m_pair):
                    blues, reds = shadow_serve(g_pair, self.R)
                    for pkt in blues:
                        m_pair.push_blue(pkt)
                    m_pair.push_red(reds)
                    down = len(blues) + reds
            else:
                if len(m_pair) > len(g_pair):
                    blues, reds = shadow_serve(m_pair, self.R)
                    for pkt in blues:
                        g_pair.push_blue(pkt)
                    g_pair.push_red(reds)
                    up = len(blues) + reds
        else:
            qm = self.q[("0.100", "2.100")]
            qg = self.q[(g, "2.100")]
            if g == "1.104":
                if len(qg) > len(qm):
                    for _ in range(min(self.R, len(qg))):
                        qm.append(qg.popleft())
                        down += 1
            else:
                if len(qm) > len(qg):
                    for _ in range(min(self.R, len(qm))):
                        qg.append(qm.popleft())
                        up += 1
        # contact log: packets each way for this super slot's contact
        self.sink.record(self._t, "contact_pickup", "0.100@%s" % g, down)
        self.sink.record(self._t, "contact_dropoff", "0.100@%s" % g, up)

    def _record_delay_histogram(self, horizon: int) -> None:
        edges = [500, 1000, 2000, 4000, 8000, 16000, 32000, 64000, 128000]
        for flow_name, delays in (("inter", self.inter_delays),
                                  ("intra", self.intra_delays)):
            counts = [0] * (len(edges) + 1)
            for d in delays:
                for i, e in enumerate(edges):
                    if d <= e:
                        counts[i] += 1
                        break
                else:
                    counts[-1] += 1
            for i, c in enumerate(counts):
                label = "<=%d" % edges[i] if i < len(edges) else ">%d" % edges[-1]
                self.sink.record(horizon, "delay_hist", "%s%s" % (flow_name, label), c)

    def _release_destination(self) -> None:
        pair = self.hq["2.103"]
        q = self.q[("2.103", "2.100")]
        if pair and len(pair) / self.T >= len(q):
            blues, reds = shadow_serve(pair, self.eta)
            for pkt in blues:
                q.append(pkt)
            for _ in range(reds):
                q.append((self._t, RED, INTER))

    def _schedule(self) -> None:
        # left cluster: single link 1.100 -> 1.104
        if self._len("1.100", "2.100") - self._len("1.104", "2.100") > 0:
            self._serve_link("1.100", "1.104")
        # right cluster: links share node 2.101, serve the heavier one
        w1 = self._len("2.103", "2.100") - self._len("2.101", "2.100")
        w2 = self._len("2.101", "2.100")
        if w1 > w2 and w1 > 0:
            self._serve_link("2.103", "2.101")
        elif w2 > 0:
            self._serve_link("2.101", "2.100")

    def run(self, horizon: int, measure_from: Optional[int] = None) -> TwoScaleResult:
        if measure_from is None:
            measure_from = horizon // 2
        self._measure_from = measure_from
        for t in range(horizon):
            self._t = t
            if t % self.T == 0 and t > 0:
                self._contact()
            a_inter, blues = self._admit(self.inter, ("1.100", "2.100"), INTER, shadow=True)
            a_intra, _ = self._admit(self.intra, ("2.101", "2.100"), INTRA, shadow=False)
            self.admitted_inter += a_inter
            self.admitted_intra += a_intra
            if t >= measure_from:
                self.admitted_inter_window += a_inter
                self.admitted_blue_window += blues
                self.admitted_intra_window += a_intra
            if self.mode == "two_scale":
                self._release_destination()
            self._schedule()
            if t % self.record_every == 0:
                self._record(t)
        self._record_delay_histogram(horizon)
        window = max(1, horizon - measure_from)
        delays = self.inter_delays
        return TwoScaleResult(
            mode=self.mode, shadow_blues_per_red=self.blues_per_red,
            inter_rate=self.admitted_inter_window / window,
            intra_rate=self.admitted_intra_window / window,
            inter_data_rate=self.admitted_blue_window / window,
            mean_inter_delay=sum(delays) / len(delays) if delays else float("nan"),
            mean_intra_delay=(sum(self.intra_delays) / len(self.intra_delays)
                              if self.intra_delays else float("nan")),
            delivered_inter_blue=self.delivered_inter_blue,
            admitted_inter=self.admitted_inter,
            useful_fraction=(self.delivered_inter_blue / self.admitted_inter
                             if self.admitted_inter else 0.0),
            max_internal_queue=self.max_internal_queue,
            max_gateway_overlay=self.max_gateway_overlay,
            sink=self.sink)

    def _record(self, t: int) -> None:
        s = self.sink
        s.record(t, "rate_est", "inter", self.inter.x)
        s.record(t, "rate_est", "intra", self.intra.x)
        for key in sorted(self.q):
            ln = len(self.q[key])
            s.record(t, "queue_len", "q[%s->%s]" % key, ln)
            if key[0] in ("1.100", "2.101"):
                self.max_internal_queue = max(self.max_internal_queue, ln)
        if self.mode == "two_scale":
            for node in ("0.100", "1.104", "2.103"):
                ln = len(self.hq[node])
                s.record(t, "overlay_len", node, ln)
                self.max_gateway_overlay = max(self.max_gateway_overlay, ln)
