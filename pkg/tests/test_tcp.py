import pytest

from ferrysim.core.rng import SeededRng
from ferrysim.tcp.acks import AckKind, ArrivingPacket, ReceiverState, dest_ack_logic, decode_complete
from ferrysim.tcp.channel import ChannelProfile, ChannelState, bimodal, fresh_state
from ferrysim.tcp.coding import CodingBlock, decode_check, decode_check_abstract, encode_block
from ferrysim.tcp.engine import MultipathSim, multipath_controller_step
from ferrysim.tcp.router import RouterQueues, router_serve
from ferrysim.tcp.windows import aqm_marking, f_eff, path_window_step, rtt_estimator, rto, window_step


# ---- window arithmetic ------------------------------------------------------

def test_window_step_examples():
    assert window_step(1, False) == 1
    assert window_step(10, True) == 11
    assert window_step(10, False) == 5
    assert window_step(11, False) == 6          # ceil(11/2)
    assert path_window_step(10, False) == 5
    with pytest.raises(ValueError):
        window_step(0, True)


def test_window_never_leaves_domain():
    rng = SeededRng(2).stream("w")
    w = 1
    for _ in range(10000):
        w = window_step(w, bool(rng.random() < 0.5))
        assert w >= 1


def test_f_eff_examples():
    assert f_eff(0.0, 0.0) == 0.0
    assert f_eff(1.0, 0.3) == 1.0
    assert f_eff(0.1, 0.2) == pytest.approx(0.28)
    with pytest.raises(ValueError):
        f_eff(-0.1, 0.5)


def test_rtt_estimator():
    assert rtt_estimator(100.0, 100.0) == pytest.approx(100.0)
    assert rtt_estimator(100.0, 200.0) == pytest.approx(110.0)
    m = 42.0
    for _ in range(400):
        m = rtt_estimator(m, 80.0)
    assert m == pytest.approx(80.0, rel=1e-6)
    assert rto(110.0) == pytest.approx(330.0)


def test_aqm_marking_shape():
    beta = 20.0
    f_chan = 0.05
    assert aqm_marking(25, beta, f_chan) == 1.0
    mark = aqm_marking(5, beta, f_chan)
    assert f_eff(mark, f_chan) == pytest.approx(2.0 / beta)


# ---- channel ----------------------------------------------------------------

def test_channel_profile_validation():
    with pytest.raises(ValueError):
        ChannelProfile([(0.5, 0.5), (0.2, 0.5)])       # not increasing
    with pytest.raises(ValueError):
        ChannelProfile([(0.5, 0.7), (1.0, 0.7)])       # weights not a law
    prof = bimodal(0.1, 0.1)
    assert prof.mean_p == pytest.approx(0.91)
    assert prof.redundancy() == 19                     # (1+r) p_min ~= 2


def test_channel_transmit_lln():
    prof = ChannelProfile([(0.05, 1.0)])
    state = ChannelState(prof, p=0.05, hold_left=1e18)
    rng = SeededRng(12).stream("lln")
    got = state.transmit(rng, 10 ** 6)
    assert abs(got / 1e6 - 0.05) < 0.001
    assert state.transmit(rng, 0) == 0
    sure = ChannelState(prof, p=1.0, hold_left=1.0)
    assert sure.transmit(rng, 17) == 17


def test_channel_single_level_constant():
    prof = ChannelProfile([(0.3, 1.0)])
    rng = SeededRng(1).stream("c")
    st = fresh_state(prof, rng)
    for _ in range(50):
        assert st.evolve(rng, 150.0) == pytest.approx(0.3)


def test_channel_occupancy_matches_weights():
    # renewal-reward: time fraction at each level equals its weight because
    # hold times are drawn from one distribution for all levels
    prof = bimodal(0.1, 0.1)
    rng = SeededRng(77).stream("occ")
    st = fresh_state(prof, rng)
    low_time = 0.0
    total = 0.0
    for _ in range(60_000):
        p_bar = st.evolve(rng, 150.0)
        low_time += (1.0 - p_bar) / (1.0 - prof.p_min) * 150.0
        total += 150.0
    assert abs(low_time / total - 0.1) < 0.01


def test_channel_expected_p_sweep():
    # E[P] from 0.91 to 0.95 as p1 sweeps 0.1..0.5 with weights (0.1, 0.9)
    means = [bimodal(p1, 0.1).mean_p for p1 in (0.1, 0.2, 0.3, 0.4, 0.5)]
    assert means == pytest.approx([0.91, 0.92, 0.93, 0.94, 0.95])


# ---- coding -----------------------------------------------------------------

def test_decode_abstract_examples():
    assert decode_check_abstract(4, 4, 0)
    blk = CodingBlock(0, 4)
    assert decode_check(blk, [0], 3, mode="abstract")       # P1 + 3 coded
    assert not decode_check(blk, [0], 2, mode="abstract")


def test_decode_concrete_matches_abstract():
    rng = SeededRng(999).stream("field")
    disagreements = 0
    trials = 10_000
    for _ in range(trials):
        W = int(rng.integers(1, 21))
        blk = CodingBlock(0, W)
        got = int(rng.integers(0, W + 1))
        received = list(rng.choice(W, size=got, replace=False))
        coded_n = int(rng.integers(0, W - got + 3))         # around the threshold
        coded_n = min(coded_n, W)
        vectors = encode_block(blk, coded_n, rng)
        abstract = decode_check(blk, received, coded_n, mode="abstract")
        concrete = decode_check(blk, received, vectors, mode="concrete")
        if abstract != concrete:
            disagreements += 1
            assert abstract and not concrete    # only genuine rank deficiency
    assert disagreements / trials < 1e-2


def test_decode_concrete_rank_logic():
    blk = CodingBlock(0, 3)
    # coded vectors that cannot span the two missing coordinates
    vecs = [[1, 2, 2], [2, 4, 4]]
    assert not decode_check(blk, [0], vecs, mode="concrete")
    vecs2 = [[1, 2, 2], [5, 4, 1]]
    assert decode_check(blk, [0], vecs2, mode="concrete")
    assert decode_check(blk, [0, 1, 2], [], mode="concrete")


# ---- router -----------------------------------------------------------------

def test_router_high_saturation():
    q = RouterQueues(capacity=7)
    hi, lo = router_serve(q, list("ABCDEFG"), list("abc"))
    assert len(hi) == 7 and lo == []


def test_router_low_only():
    q = RouterQueues(capacity=7)
    hi, lo = router_serve(q, [], list("abcdefg"))
    assert hi == [] and len(lo) == 7


def test_router_lifo_leftover():
    q = RouterQueues(capacity=7)
    hi, lo = router_serve(q, ["H1", "H2", "H3"], ["l%d" % k for k in range(10)])
    assert hi == ["H1", "H2", "H3"]
    assert lo == ["l9", "l8", "l7", "l6"]       # the 4 newest, newest first


def test_router_carryover_tail_drop():
    q = RouterQueues(capacity=2, carryover=True, buffer=3)
    hi, lo = router_serve(q, ["H1", "H2", "H3", "H4"], ["l1", "l2", "l3", "l4", "l5"])
    assert hi == ["H1", "H2"] and lo == []
    assert list(q.high) == ["H3", "H4"]
    assert q.low == ["l3", "l4", "l5"]          # oldest dropped first


# ---- acks -------------------------------------------------------------------

def test_ack_in_order():
    st = ReceiverState()
    ev = dest_ack_logic(st, ArrivingPacket(frame=0))
    assert ev.kind == AckKind.ACK and ev.next_expected == 1


def test_ack_replay_recovery_example():
    # P1 arrives, P2-P4 lost, three innovative coded packets arrive, then the
    # block decodes and the cumulative ACK jumps past P4
    st = ReceiverState()
    assert dest_ack_logic(st, ArrivingPacket(frame=0)).kind == AckKind.ACK
    for _ in range(3):
        ev = dest_ack_logic(st, ArrivingPacket(coded=True, innovative=True))
        assert ev.kind == AckKind.PSEUDO_ACK
    ev = decode_complete(st, block_end=4)
    assert ev.kind == AckKind.ACK and ev.next_expected == 4


def test_ack_duplicate_on_non_innovative():
    st = ReceiverState()
    dest_ack_logic(st, ArrivingPacket(frame=0))
    ev = dest_ack_logic(st, ArrivingPacket(coded=True, innovative=False))
    assert ev.kind == AckKind.DUP_ACK
    ev = dest_ack_logic(st, ArrivingPacket(frame=0))    # already held
    assert ev.kind == AckKind.DUP_ACK
    ev = dest_ack_logic(st, ArrivingPacket(frame=5))    # out of order data
    assert ev.kind == AckKind.PSEUDO_ACK


# ---- controller step ----------------------------------------------------------

def test_controller_step_all_success():
    W, w, plan = multipath_controller_step(
        10, [3, 3], [20, 20], [3, 3], redundancy=4, decode_ok=True)
    assert W == 11 and w == [4, 4]
    assert plan.data == [4, 4] and plan.coded == [16, 16]


def test_controller_step_path_fail_decode_ok():
    W, w, plan = multipath_controller_step(
        10, [4, 4], [20, 20], [6, 1], redundancy=4, decode_ok=True)
    assert W == 11
    assert w == [5, 2]                          # path 2 halved


def test_controller_step_single_path_reduces():
    W, w, _ = multipath_controller_step(7, [7], [50], [6], 19, decode_ok=False)
    assert W == 4 and w == [4]
    with pytest.raises(ValueError):
        multipath_controller_step(1, [0], [10], [0], 19, True)


def test_controller_blackout_resets():
    W, w, _ = multipath_controller_step(40, [5], [50], [0], 19, decode_ok=False,
                                        blackout=True)
    assert W == 1


# ---- engine-level properties ---------------------------------------------------

def test_multipath_single_path_is_special_case():
    prof = bimodal(0.5, 0.1)
    res = MultipathSim(1, 100, prof, mode="rlc", seed=5).run(4000)
    assert res.goodput > 0
    assert len(res.mean_path_windows) == 1


def test_router_saturation_invariant():
    # with r > 2(1-p1)/p1 and stabilized path windows the routers ship the
    # full capacity nearly every slot
    prof = bimodal(0.1, 0.1)
    res = MultipathSim(4, 200, prof, mode="rlc", seed=11).run(10_000)
    assert res.saturated_fraction >= 0.99


def test_fixed_fec_bounded_and_monotone_in_good_state_mass():
    # static 10% FEC against levels {0.85, 0.95}: mean window shrinks as the
    # probability of the good state falls
    windows = []
    for w_good in (0.9, 0.5, 0.1):
        prof = ChannelProfile([(0.85, 1.0 - w_good), (0.95, w_good)])
        res = MultipathSim(1, 200, prof, mode="fixed_fec", seed=21).run(12_000)
        windows.append(res.mean_window)
        assert res.mean_window < 220            # bounded
    assert windows[0] > windows[1] > windows[2]


def test_aqm_run_respects_theorem_bound():
    # the marking scheme with beta from the fixed-point equation guarantees a
    # mean window at least the closed-form lower bound
    from ferrysim.tcp.analysis import throughput_lower_bound
    prof = bimodal(0.1, 0.1)
    rho = 1.2
    bound, regime = throughput_lower_bound(8, 25, rho, prof)
    res = MultipathSim(8, 200, prof, mode="rlc", seed=13, aqm_rho=rho).run(15_000)
    assert res.mean_window >= bound
    # marking caps the window near floor(beta)
    assert res.mean_window < prof.mean_p * 200
