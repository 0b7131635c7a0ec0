"""RTT-slotted simulation of coded multipath TCP against its baselines.

One step is one RTT interval: the block of W data packets is encoded, every
path ships w_l data + r*w_l coded packets through its C-capacity router with
data priority, the Bernoulli channel thins them, path windows react to their
own totals, and the top window reacts to whether the block decoded.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..core.metrics import MetricsSink
from ..core.rng import SeededRng
from .analysis import solve_beta
from .channel import ChannelProfile, ChannelState, fresh_state
from .windows import aqm_marking, path_window_step, window_step


@dataclass
class PacketPlan:
    data: List[int]                 # per path: data packets this slot
    coded: List[int]                # per path: coded packets this slot


def multipath_controller_step(W: int, w_paths: List[int], capacities: List[int],
                              delivered: List[int], redundancy: int,
                              decode_ok: bool, blackout: bool = False
                              ) -> Tuple[int, List[int], PacketPlan]:
    """One controller update: W follows the decode outcome, each w_l follows
    its own path total, and the next slot's plan assigns w_l data + r*w_l
    coded packets per path from the shared block (router capacity capped)."""
    if sum(w_paths) < 1:
        raise ValueError("at least one path window must be live")
    new_w = [path_window_step(w, d >= w) for w, d in zip(w_paths, delivered)]
    new_W = 1 if blackout else window_step(W, decode_ok)
    data = [min(w, c) for w, c in zip(new_w, capacities)]
    coded = [min(redundancy * w, c - d) for w, c, d in zip(new_w, capacities, data)]
    return new_W, new_w, PacketPlan(data, coded)


@dataclass
class MultipathResult:
    mode: str
    paths: int
    total_capacity: int
    mean_window: float
    goodput: float                  # decoded data pkts per slot, post warm-up
    mean_path_windows: List[float]
    decode_failures: int
    saturated_fraction: float       # slots where the routers shipped C total
    sink: MetricsSink = None


class MultipathSim:
    """grace = RTT slots a short block may wait for late coded packets before
    the duplicate-ACK storm halves the window; the timeout clock is 3 RTTs,
    so recovery spans up to two extra intervals."""

    def __init__(self, paths: int, total_capacity: int, profile: ChannelProfile,
                 mode: str = "rlc", redundancy: Optional[int] = None, seed: int = 11,
                 rtt_lo: float = 100.0, rtt_hi: float = 200.0, fec_rate: float = 0.1,
                 grace: int = 2, aqm_rho: Optional[float] = None,
                 run_id: str = "tcp", record_every: int = 200):
        if mode not in ("rlc", "plain", "fixed_fec"):
            raise ValueError("mode must be rlc, plain or fixed_fec")
        if total_capacity % paths:
            raise ValueError("total capacity must split evenly across paths")
        self.M = paths
        self.C = total_capacity // paths
        self.total = total_capacity
        self.profile = profile
        self.mode = mode
        self.r = redundancy if redundancy is not None else profile.redundancy()
        self.fec_rate = fec_rate
        self.grace = grace
        self.rngs = SeededRng(seed)
        self.sink = MetricsSink(run_id)
        self.record_every = record_every
        chan_rng = [self.rngs.stream("chan/%d" % i) for i in range(paths)]
        self.rtt = [float(r.uniform(rtt_lo, rtt_hi)) for r in chan_rng]
        self.chan: List[ChannelState] = [fresh_state(profile, r) for r in chan_rng]
        self.chan_rng = chan_rng
        self.path_rng = [self.rngs.stream("path/%d" % i) for i in range(paths)]
        self.W = 1
        self.w = [1] * paths
        self.w_sep = [1] * paths
        self.buffer = total_capacity    # router data buffering: one RTT's worth
        self._backlog = 0               # data waiting in router buffers (benign)
        self._deficit = 0               # data lost on air, awaiting coded repair
        self._age = 0
        # optional marking at the analysis level: flat 2/beta below floor(beta)
        self.aqm_beta = None
        if aqm_rho is not None:
            sol = solve_beta(self.M, self.C, aqm_rho, profile)
            self.aqm_beta = sol.beta if sol.beta is not None \
                else profile.mean_p * self.M * self.C / aqm_rho ** 2
            self._aqm_rng = self.rngs.stream("aqm")

    def run(self, horizon: int, measure_from: Optional[int] = None) -> MultipathResult:
        if measure_from is None:
            measure_from = horizon // 2
        window_sum = 0.0
        path_sums = [0.0] * self.M
        goodput = 0
        failures = 0
        saturated = 0
        measured_slots = 0
        for t in range(horizon):
            p_bar = [self.chan[i].evolve(self.chan_rng[i], self.rtt[i])
                     for i in range(self.M)]
            if self.mode == "plain":
                decoded = self._slot_plain(p_bar)
            elif self.mode == "fixed_fec":
                decoded = self._slot_fixed_fec(p_bar)
            else:
                decoded, sat = self._slot_rlc(p_bar)
                if t >= measure_from:
                    saturated += sat
            if t >= measure_from:
                measured_slots += 1
                goodput += decoded
                failures += decoded == 0
                if self.mode == "plain":
                    window_sum += sum(self.w_sep)
                    for i in range(self.M):
                        path_sums[i] += self.w_sep[i]
                else:
                    window_sum += self.W
                    for i in range(self.M):
                        path_sums[i] += self.w[i]
            if t % self.record_every == 0:
                self.sink.record(t, "window", "W", self.W if self.mode != "plain"
                                 else sum(self.w_sep))
                if self.mode == "rlc":
                    for i, w in enumerate(self.w):
                        self.sink.record(t, "path_window", "w%d" % i, w)
                self.sink.record(t, "goodput_cum", "all", goodput)
                self.sink.record(t, "decode_failures_cum", "all", failures)
        n = max(1, measured_slots)
        return MultipathResult(
            mode=self.mode, paths=self.M, total_capacity=self.total,
            mean_window=window_sum / n, goodput=goodput / n,
            mean_path_windows=[s / n for s in path_sums],
            decode_failures=failures,
            saturated_fraction=saturated / n if self.mode == "rlc" else 0.0,
            sink=self.sink)

    # -- slot flavors -------------------------------------------------------

    def _slot_rlc(self, p_bar: List[float]) -> Tuple[int, int]:
        """One RTT of the coded pipeline.

        The window admits data into the pipe; the routers forward up to C per
        path (coded filler keeps them saturated); channel losses leave a
        repair deficit that later coded packets clear.  The window stalls
        while a young deficit is being repaired, halves when the repair
        outlives the grace interval, and resets on a blackout.  Repaired data
        still counts as goodput: delivery is reliable, lateness is not loss.
        """
        delivered = []
        shipped_total = 0
        for i in range(self.M):
            high = min(self.w[i], self.C)
            low = min(self.r * self.w[i], self.C - high)
            shipped_total += high + low
            delivered.append(self.chan[i].transmit(self.path_rng[i], high + low,
                                                   p=p_bar[i]))
        D = sum(delivered)
        # path windows react to their own totals immediately (path-level ACKs)
        self.w = [path_window_step(w, d >= w) for w, d in zip(self.w, delivered)]
        issue = max(0, self.W - self._backlog - self._deficit)
        wire = self._backlog + issue
        sent = min(wire, self.total)
        self._backlog = wire - sent
        # repair the stuck block first, then fresh data
        recovered_old = min(self._deficit, D)
        recovered_new = min(sent, D - recovered_old)
        gained = recovered_old + recovered_new
        self._deficit = self._deficit - recovered_old + (sent - recovered_new)
        marked = (self.aqm_beta is not None and
                  self._aqm_rng.random() < aqm_marking(self.W, self.aqm_beta, 0.0))
        if D == 0:
            self.W = 1
            self._age = 0
        elif marked:
            self.W = window_step(self.W, False)
        elif self._deficit == 0:
            self._age = 0
            self.W = window_step(self.W, True)
        else:
            self._age += 1
            if self._age >= self.grace:       # dup-ACK storm / stuck ACK clock
                self.W = window_step(self.W, False)
                self._age = 0
        if self._backlog > self.buffer:       # tail drop at the router
            self._backlog = self.buffer
            self.W = window_step(self.W, False)
        return gained, 1 if shipped_total >= self.total else 0

    def _slot_plain(self, p_bar: List[float]) -> int:
        """No-coding ablation: the same striped connection, but a block
        survives only if every data packet lands (nothing repairs gaps)."""
        W = self.W
        base, extra = divmod(W, self.M)
        sent_total = 0
        got_total = 0
        for i in range(self.M):
            share = min(base + (1 if i < extra else 0), self.C)
            sent_total += share
            got_total += self.chan[i].transmit(self.path_rng[i], share, p=p_bar[i])
        ok = sent_total == W and got_total == W
        gained = W if ok else 0
        if not ok and got_total < W / 2:
            self.W = 1                        # ACK stream died: timeout
        else:
            self.W = window_step(self.W, ok)
        return gained

    def _slot_fixed_fec(self, p_bar: List[float]) -> int:
        # static coding rate: W data + ceil(fec * W) coded, no priority split
        coded = int(self.fec_rate * self.W + 0.999999)
        per_path = [0] * self.M
        remaining = min(self.W + coded, self.total)
        for i in range(self.M):
            per_path[i] = min(self.C, remaining)
            remaining -= per_path[i]
        got = sum(self.chan[i].transmit(self.path_rng[i], per_path[i], p=p_bar[i])
                  for i in range(self.M))
        ok = got >= self.W
        gained = self.W if ok else 0
        self.W = window_step(self.W, ok)
        return gained
