"""Two-scale overlay operations: gateway selection, threshold-gated transfers
between overlay (type-II) and in-cluster (type-I) queues, mobile exchanges,
scaled gateway advertisement, and the closed-form delay bounds.

Threshold orientation follows the algorithm as printed: the source/gateway/
destination transfer gates are strict (>), while the rate-control release at
the destination gateway is non-strict (>=).
"""

from typing import Callable, Dict, Sequence, Tuple


def select_gateways(u: Callable[[str, str], float], source: str, dest: str,
                    src_gateways: Sequence[str], dst_gateways: Sequence[str]) -> Tuple[str, str]:
    """Gateway pair minimizing u_s^{gs} + u_{gs}^{gd} + u_{gd}^{d}; ties to lowest ids."""
    best, best_val = None, None
    for gs in sorted(src_gateways):
        for gd in sorted(dst_gateways):
            val = u(source, gs) + u(gs, gd) + u(gd, dest)
            if best_val is None or val < best_val:
                best, best_val = (gs, gd), val
    if best is None:
        raise ValueError("flow [%s,%s] has no gateway pair" % (source, dest))
    return best


def transfer_quota(u_len: float, q_len: float, scale: float, eta: int,
                   strict: bool = True) -> int:
    """Packets to move from an overlay queue into its type-I twin this slot.

    Moves min(eta, available) when u/scale beats the type-I length; `strict`
    distinguishes the '>' transfer gates from the '>=' release gate.
    """
    theta = u_len / scale
    open_gate = theta > q_len if strict else theta >= q_len
    if not open_gate:
        return 0
    return int(min(eta, u_len))


def transfer_source(u_len: int, q_len: int, k_s: float, eta: int) -> int:
    return transfer_quota(u_len, q_len, k_s, eta, strict=True)


def transfer_destination(u_len: int, q_len: int, k_gd: float, eta: int) -> int:
    return transfer_quota(u_len, q_len, k_gd, eta, strict=True)


def gateway_balance_commodity(u_g1: Dict[str, int], u_g2: Dict[str, int],
                              commodities: Sequence[str]) -> Tuple[str, float]:
    """argmax_l (u_g1^l - u_g2^l), recomputed once per super slot; ties to lowest id."""
    best, best_diff = None, float("-inf")
    for l in sorted(commodities):
        diff = u_g1.get(l, 0) - u_g2.get(l, 0)
        if diff > best_diff:
            best, best_diff = l, diff
    return best, best_diff


def transfer_gateway_balance(u_g1_l: int, diff_at_tau: float, q_g1_g2: int,
                             k_g1: float, eta: int) -> int:
    """Move eta packets of the super-slot's balancing commodity toward a peer
    gateway when the scaled differential beats the relay type-I queue."""
    theta = diff_at_tau / k_g1
    if theta > q_g1_g2:
        return int(min(eta, u_g1_l))
    return 0


def mobile_gateway_exchange(u_m: Dict[str, int], u_g: Dict[str, int], budget: int,
                            commodities: Sequence[str]) -> Tuple[Tuple[str, int], Tuple[str, int]]:
    """Per-contact exchange: each side ships `budget` packets of the commodity
    with its largest positive differential; returns ((up_commodity, up_pkts),
    (down_commodity, down_pkts)) where the commodity is None when no
    differential is positive."""
    def pick(a, b):
        best, best_diff = None, 0.0
        for j in sorted(commodities):
            diff = a.get(j, 0) - b.get(j, 0)
            if diff > best_diff:
                best, best_diff = j, diff
        return best

    up = pick(u_m, u_g)
    down = pick(u_g, u_m)
    up_pkts = min(budget, u_m.get(up, 0)) if up is not None else 0
    down_pkts = min(budget, u_g.get(down, 0)) if down is not None else 0
    return (up, up_pkts), (down, down_pkts)


def advertise_gateway_queue(hq_len: int, T: int) -> float:
    """A gateway advertises its raw overlay backlog scaled down by T."""
    if T <= 0:
        raise ValueError("super-slot period must be positive")
    return hq_len / T


def destination_gateway_release(hq_len: int, q_len: int, T: int, eta: int) -> int:
    """Release eta packets into the cluster iff hq/T >= q (non-strict, as printed)."""
    if advertise_gateway_queue(hq_len, T) >= q_len:
        return int(min(eta, hq_len))
    return 0


def loop_prevention_filter(last_gateway: str, candidate_gateway: str) -> bool:
    """Mobiles never hand a packet back to the gateway it came from."""
    return last_gateway is None or candidate_gateway != last_gateway


def bpsr_delay_bounds(n_c: int, T: int, gamma: float, eps: float) -> Tuple[float, float]:
    """Closed-form pickup-delay bounds on the directed line:
    traditional BP at least (N_c-1)(2T(1-gamma-eps)-1); BP+SR at most N_c^2 + 3T."""
    if n_c < 2:
        raise ValueError("line bound needs N_c >= 2")
    if T < 1:
        raise ValueError("need T >= 1")
    if not 0 < gamma + eps < 1:
        raise ValueError("need 0 < gamma + eps < 1")
    bp_lower = (n_c - 1) * (2 * T * (1 - gamma - eps) - 1)
    bpsr_upper = n_c ** 2 + 3 * T
    return bp_lower, bpsr_upper


def estimate_super_slot(contact_slots: Sequence[int]) -> float:
    """Mean inter-contact gap; any Theta(T) estimate keeps the algorithms optimal."""
    if len(contact_slots) < 2:
        raise ValueError("need at least two contacts to estimate T")
    gaps = [b - a for a, b in zip(contact_slots, contact_slots[1:])]
    return sum(gaps) / len(gaps)


class RegulatedOverlay:
    """Analysis-only split of a gateway overlay queue into its raw part and a
    regulated part fed at rate (1+delta) * (assigned inter-cluster load).

    Never used by the routing path; tests drive it alongside a run to check
    that the raw backlog stays bounded once the regulated drain has slack.
    """

    def __init__(self, delta: float):
        if delta <= 0:
            raise ValueError("delta must be positive")
        self.delta = delta
        self.raw = 0.0          # u-tilde: packets as they physically arrive
        self.regulated = 0.0    # u: what the analysis meters out
        self._carry = 0.0

    def arrive(self, packets: float) -> None:
        self.raw += packets

    def step(self, assigned_rate: float) -> float:
        """One slot: move (1+delta) * assigned_rate packets raw -> regulated."""
        quota = (1.0 + self.delta) * assigned_rate + self._carry
        moved = min(self.raw, quota)
        self._carry = quota - moved if self.raw < quota else 0.0
        self.raw -= moved
        self.regulated += moved
        return moved

    def drain(self, packets: float) -> float:
        taken = min(self.regulated, packets)
        self.regulated -= taken
        return taken
