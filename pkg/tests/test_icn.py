import numpy as np
import pytest

from ferrysim.core.rng import SeededRng
from ferrysim.icn.engine import LineDelaySim, TwoScaleRcSim
from ferrysim.icn.mobility import MobileState, MobilityError, ring_chain, shuttle
from ferrysim.icn.shadow import ShadowQueuePair, shadow_serve
from ferrysim.icn import twoscale as ts


# ---- gateway selection ----------------------------------------------------

def test_select_gateways_singleton():
    u = lambda a, b: 0.0
    assert ts.select_gateways(u, "s", "d", ["gA"], ["gD"]) == ("gA", "gD")


def test_select_gateways_enumerates_pairs():
    table = {("s", "gA"): 10, ("s", "gB"): 50, ("gA", "gD"): 100,
             ("gB", "gD"): 20, ("gD", "d"): 0}
    u = lambda a, b: table.get((a, b), 0)
    assert ts.select_gateways(u, "s", "d", ["gA", "gB"], ["gD"]) == ("gB", "gD")


def test_select_gateways_tie_lowest_pair():
    u = lambda a, b: 7.0
    assert ts.select_gateways(u, "s", "d", ["gB", "gA"], ["gZ", "gY"]) == ("gA", "gY")


# ---- threshold transfers --------------------------------------------------

def test_transfer_source_threshold():
    # T=1000, |C|=10 -> K_s=100
    assert ts.transfer_source(500, 4, 100.0, 10) == 10   # theta=5 > 4
    assert ts.transfer_source(500, 5, 100.0, 10) == 0    # strict
    assert ts.transfer_source(0, 0, 100.0, 10) == 0


def test_transfer_source_capped_by_backlog():
    assert ts.transfer_source(3, 0, 100.0, 10) == 3


def test_transfer_destination_boundary():
    k = 1000.0 / 12
    assert ts.transfer_destination(0, 0, k, 3) == 0
    u = 500
    assert ts.transfer_destination(u, int(u / k) - 1, k, 3) == 3
    # theta == q exactly -> strict gate stays shut
    assert ts.transfer_destination(500, 6, 500 / 6.0, 3) == 0


def test_gateway_balance_commodity_and_transfer():
    u1 = {"X": 900, "Y": 300}
    u2 = {"X": 100, "Y": 100}
    l, diff = ts.gateway_balance_commodity(u1, u2, ["X", "Y"])
    assert (l, diff) == ("X", 800)
    # T=1000, |C|=10 -> K=100: theta=8 > q=3 -> move eta
    assert ts.transfer_gateway_balance(u1["X"], diff, 3, 100.0, 10) == 10
    assert ts.transfer_gateway_balance(u1["X"], 0.0, 0, 100.0, 10) == 0  # balanced


def test_mobile_gateway_exchange():
    up, down = ts.mobile_gateway_exchange({"gX": 2000}, {"gX": 0}, 1500, ["gX"])
    assert up == ("gX", 1500) and down == (None, 0)
    up, down = ts.mobile_gateway_exchange({"g": 5}, {"g": 5}, 100, ["g"])
    assert up == (None, 0) and down == (None, 0)
    up, down = ts.mobile_gateway_exchange({}, {"gX": 40}, 100, ["gX"])
    assert up == (None, 0) and down == ("gX", 40)


def test_advertise_and_release():
    assert ts.advertise_gateway_queue(0, 6000) == 0.0
    assert ts.advertise_gateway_queue(50000, 6000) == pytest.approx(50000 / 6000)
    assert ts.advertise_gateway_queue(6000, 6000) == 1.0
    # non-strict release gate, as printed
    assert ts.destination_gateway_release(12000, 1, 6000, 3) == 3
    assert ts.destination_gateway_release(0, 0, 6000, 3) == 0
    assert ts.destination_gateway_release(6000, 1, 6000, 3) == 3   # 1 >= 1


def test_loop_prevention():
    assert not ts.loop_prevention_filter("gA", "gA")
    assert ts.loop_prevention_filter("gA", "gB")
    assert ts.loop_prevention_filter(None, "gA")


def test_bpsr_delay_bounds_examples():
    lo, hi = ts.bpsr_delay_bounds(2, 100, 0.2, 0.05)
    assert lo == pytest.approx(149)
    assert hi == 4 + 300
    lo2, _ = ts.bpsr_delay_bounds(3, 100, 0.2, 0.05)
    assert lo2 - lo == pytest.approx(2 * 100 * 0.75 - 1)   # linear in N_c
    lo3, _ = ts.bpsr_delay_bounds(4, 100, 0.5, 0.4999999)
    assert lo3 == pytest.approx(-(4 - 1), abs=1e-2)        # degenerate limit
    with pytest.raises(ValueError):
        ts.bpsr_delay_bounds(2, 100, 0.9, 0.2)
    with pytest.raises(ValueError):
        ts.bpsr_delay_bounds(1, 100, 0.2, 0.05)


def test_estimate_super_slot():
    assert ts.estimate_super_slot([0, 100, 220, 300]) == pytest.approx(100.0)
    with pytest.raises(ValueError):
        ts.estimate_super_slot([5])


# ---- mobility -------------------------------------------------------------

def test_shuttle_alternates():
    m = shuttle("m", "gA", "gB", 100)
    rng = SeededRng(1).stream("m")
    seq = [m.step(rng) for _ in range(6)]
    assert seq == ["gB", "gA", "gB", "gA", "gB", "gA"]
    assert m.pi == pytest.approx([0.5, 0.5])


def test_ring_chain_frequencies_and_pi():
    m = ring_chain("m1", ["g1", "g2", "g3"], forward=0.8, stay=0.1)
    assert np.allclose(m.pi, [1 / 3] * 3, atol=1e-9)       # symmetric chain
    assert np.max(np.abs(m.pi @ m.P - m.pi)) < 1e-9
    rng = SeededRng(2024).stream("chain")
    steps = 100_000
    moves = {"fwd": 0, "stay": 0, "back": 0}
    occupancy = np.zeros(3)
    for _ in range(steps):
        before = m.current
        m.step(rng)
        after = m.current
        occupancy[after] += 1
        if after == (before + 1) % 3:
            moves["fwd"] += 1
        elif after == before:
            moves["stay"] += 1
        else:
            moves["back"] += 1
    assert abs(moves["fwd"] / steps - 0.8) < 0.02
    assert abs(moves["stay"] / steps - 0.1) < 0.02
    assert abs(moves["back"] / steps - 0.1) < 0.02
    assert np.max(np.abs(occupancy / steps - 1 / 3)) < 0.02


def test_mobility_validation():
    with pytest.raises(MobilityError):
        MobileState("m", ["a", "b"], np.array([[0.5, 0.4], [0.5, 0.5]]))
    with pytest.raises(MobilityError):  # reducible
        MobileState("m", ["a", "b"], np.array([[1.0, 0.0], [0.0, 1.0]]))
    m = shuttle("m", "a", "b", 10)
    assert not m.aperiodic                 # recorded, not enforced
    assert ring_chain("m", list("abc"), 0.8, 0.1).aperiodic


# ---- shadow ---------------------------------------------------------------

def test_shadow_strict_priority():
    pair = ShadowQueuePair()
    for k in range(5):
        pair.push_blue(("b%d" % k,))
    pair.push_red(5)
    blues, reds = shadow_serve(pair, 5)
    assert len(blues) == 5 and reds == 0


def test_shadow_leftover_fill():
    pair = ShadowQueuePair()
    pair.push_blue(("b0",))
    pair.push_blue(("b1",))
    pair.push_red(5)
    blues, reds = shadow_serve(pair, 5)
    assert len(blues) == 2 and reds == 3
    assert len(pair) == 2


def test_shadow_weight_counts_both():
    pair = ShadowQueuePair()
    pair.push_blue((1,))
    pair.push_red(2)
    assert len(pair) == 3


# ---- engines --------------------------------------------------------------

def test_line_sim_conservation_and_bounds():
    sim = LineDelaySim(n_c=5, T=100, gamma=0.2, mode="bpsr", seed=9)
    res = sim.run(40 * 100)
    assert res.created == res.delivered + res.in_flight
    assert res.hop_bound_violations == 0
    assert res.max_u_source < 100
    assert res.picked > 0 and res.mean_pickup_delay > 0


def test_line_sim_bp_queues_grow_to_contact_scale():
    sim = LineDelaySim(n_c=5, T=100, gamma=0.2, mode="bp", seed=9)
    res = sim.run(40 * 100)
    assert res.created == res.delivered + res.in_flight
    # traditional BP needs Theta(T)-scale queues at the gateway
    assert res.max_u_gateway > 0.5 * 100


def test_two_scale_sim_determinism_and_conservation():
    def run():
        sim = TwoScaleRcSim(K1=200, K2=200, T=100, beta=0.5, run_id="t")
        res = sim.run(20_000)
        return sim, res
    sim1, res1 = run()
    sim2, res2 = run()
    assert res1.sink.to_csv() == res2.sink.to_csv()
    in_queues = sum(len(q) for q in sim1.q.values())
    in_overlay = sum(len(p) for p in sim1.hq.values())
    delivered = (sim1.delivered_inter_blue + sim1.delivered_inter_red
                 + sim1.delivered_intra)
    assert sim1.admitted_inter + sim1.admitted_intra == delivered + in_queues + in_overlay


def test_two_scale_advertised_scale():
    # gateway overlays hold Theta(T)-scale backlog while internal queues stay
    # near the advertised scale (large raw backlog, small in-cluster queues)
    sim = TwoScaleRcSim(K1=200, K2=200, T=200, beta=0.5, run_id="t2")
    sim.run(120_000)
    assert sim.max_gateway_overlay > 20 * sim.max_internal_queue


def test_regulated_overlay_tracks_and_stays_bounded():
    # analysis-only instrumentation: with drain slack (1+delta) the raw part
    # of the overlay stays bounded under steady assigned load
    from ferrysim.icn.twoscale import RegulatedOverlay
    reg = RegulatedOverlay(delta=0.1)
    rng = SeededRng(6).stream("reg")
    rate = 0.5
    max_raw = 0.0
    for _ in range(20_000):
        reg.arrive(1.0 if rng.random() < rate else 0.0)
        reg.step(rate)
        reg.drain(reg.regulated)
        max_raw = max(max_raw, reg.raw)
    assert max_raw < 200
    with pytest.raises(ValueError):
        RegulatedOverlay(0.0)


def _grid_setup(T=300, budget=1200):
    from ferrysim.core.topology import build_grid
    from ferrysim.icn.grid import GridBpsrSim, GridFlow
    from ferrysim.icn.mobility import ring_chain
    topo = build_grid(3, 4, clusters=3, gateways_per_cluster=2, mobiles=2)
    g1 = [topo.gateways["C%d" % i][0] for i in (1, 2, 3)]
    g2 = [topo.gateways["C%d" % i][1] for i in (1, 2, 3)]
    mobiles = [ring_chain("0.100", g1, 0.8, 0.1, contact_budget=budget),
               ring_chain("0.101", g2, 0.8, 0.1, contact_budget=budget, direction=-1)]
    inter = [GridFlow("1.105", "2.106", 0.2), GridFlow("2.101", "3.110", 0.2),
             GridFlow("3.105", "1.106", 0.2)]
    intra = [GridFlow("1.101", "1.110", 0.3), GridFlow("2.105", "2.102", 0.3),
             GridFlow("3.101", "3.106", 0.3)]
    return GridBpsrSim(topo, T, mobiles, inter, intra, eta=10, seed=5), T


def test_grid_bpsr_end_to_end():
    sim, T = _grid_setup()
    res = sim.run(25 * T)
    created = sum(res.created.values())
    delivered = sum(res.delivered.values())
    assert created == delivered + res.in_flight          # exact conservation
    assert all(v > 0 for v in res.delivered.values())    # every flow progresses
    # queue locality: only sources/gateways/mobiles hold Theta(T) backlogs
    assert res.max_internal_type1 < 0.15 * T
    assert res.max_source_overlay < T
    assert res.max_gateway_overlay > res.max_internal_type1 * 5
    assert res.mean_inter_delay > 0


def test_grid_bpsr_deterministic():
    a = _grid_setup()[0].run(6 * 300).sink.to_csv()
    b = _grid_setup()[0].run(6 * 300).sink.to_csv()
    assert a == b and len(a) > 100
