from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bursty_ic.capacity_ld import corner_points, sym_capacity
from bursty_ic.ld_channel import ConfigError
from bursty_ic.results import DecodeFailure, SimResult
from bursty_ic.schemes import (
    causality_audit,
    plan_levels,
    run_bursty_relay,
    run_corner,
    run_multicarrier,
    run_single_strong,
    run_single_weak,
)
from bursty_ic.schemes import flows
from bursty_ic.schemes.engine import Messages, dump_trace, run_engine
from bursty_ic.schemes.lanes import phase_r
from bursty_ic.state_process import make_identical, make_iid

HALF = F(1, 2)
TOY = [(1, 1), (1, 3)]
EX1 = [(2, 2), (1, 3)]
EX2 = [(1, 1), (1, 4)]


def rng(seed=0):
    return np.random.default_rng(seed)


# planning

def test_plan_toy():
    plan = plan_levels(TOY)
    a, b = plan.lanes
    assert a.h == 1 and b.h == 0
    assert b.fresh_levels == (1,) and b.helper_levels == (2,) and b.unused_levels == (3,)
    assert plan.delta_left == 0 and plan.pairing == [((0, 0), (1, 2))]


def test_plan_examples():
    ex1 = plan_levels(EX1)
    assert [l.h for l in ex1.lanes] == [1, 0] and ex1.delta_left == 0
    assert ex1.lanes[0].helped_tx_levels == (2,)  # bottom level is helped
    ex2 = plan_levels(EX2)
    assert [l.h for l in ex2.lanes] == [1, 0] and ex2.delta_left == 1
    assert ex2.relay_positions == [(1, 3)]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 4), st.integers(0, 12)), min_size=1, max_size=4))
def test_plan_invariants(cfgs):
    plan = plan_levels(cfgs)
    plan.check()
    if plan.delta < 0:
        budget = sum(max(k - 2 * n, 0) for n, k in cfgs)
        assert plan.helped_total == budget
        # greedy: a lane is only partly filled if every later lane is empty
        hs = [(l.h, l.cap) for l in plan.lanes]
        for i, (h, cap) in enumerate(hs):
            if h < cap:
                assert all(h2 == 0 for h2, _ in hs[i + 1:])


# flows and phase machine

def test_phase_r_pattern():
    S = np.array([1, 1, 1, 0, 1, 0, 0, 1], dtype=bool)
    # interfered F at 0 -> R at 1; F at 2 interfered -> R at 3; F at 4 -> R at 5
    assert phase_r(S).astype(int).tolist() == [0, 1, 0, 1, 0, 1, 0, 0]


def test_flow_roundtrip_with_erasures():
    r = rng(4)
    N, G = 3000, 8
    rx = r.random(N) < 0.4
    ready = np.sort(r.integers(0, N // 2, 200))
    avail = flows.avail_from_ready(ready, N, G)
    sched = flows.schedule(avail, np.ones(N, bool), rx, G)
    items = r.integers(0, 65537, 200)
    vals = flows.encode(items, sched)
    got = flows.decode(sched, vals[sched.recv_mask])
    idx, est = got.flat()
    assert len(idx) == 200 // G * G
    assert np.array_equal(est, items[idx])
    # never transmits combinations of a generation before it is available
    assert np.all((sched.tx_gens + 1) * G <= avail[sched.tx_slots])


# single-carrier lanes

@pytest.mark.parametrize("n,k,fn", [(2, 1, run_single_weak), (1, 1, run_single_weak),
                                    (2, 3, run_single_strong)])
def test_single_rates(n, k, fn):
    res = fn(n, k, HALF, 50_000, rng(1))
    target = float(sym_capacity([(n, k)], HALF))
    assert res.rates[0] == pytest.approx(target, rel=0.02)
    assert res.rates[1] == pytest.approx(target, rel=0.02)
    assert res.details["learned_mismatch"] == 0


def test_f_occupancy_within_3_sigma():
    N = 100_000
    res = run_single_weak(2, 1, HALF, N, rng(2))
    occ = res.details["f_occupancy"]
    # stationary F share 1/(1+p); cycles are correlated so use a loose sigma
    sigma = np.sqrt(0.25 / N) * 2
    assert abs(occ - 2 / 3) < 3 * sigma


@pytest.mark.parametrize("n,k", [(2, 1), (2, 3), (1, 1)])
def test_p0_exact(n, k):
    fn = run_single_weak if k <= n else run_single_strong
    res = fn(n, k, 0, 1000, rng())
    assert res.delivered == (n * 1000, n * 1000)


def test_strong_p1():
    res = run_single_strong(2, 3, 1, 10_000, rng())
    assert res.exact_rates[0] == F(3, 2)


def test_single_preconditions():
    with pytest.raises(ConfigError):
        run_single_weak(1, 2, HALF, 10, rng())
    with pytest.raises(ConfigError):
        run_single_strong(1, 3, HALF, 10, rng())
    with pytest.raises(ConfigError):
        run_bursty_relay(1, 2, HALF, 100, 2, rng())


def test_relay_rates():
    res = run_bursty_relay(1, 3, HALF, 5000, 10, rng(3))
    assert res.rates[0] == pytest.approx(1.25, rel=0.02)
    res = run_bursty_relay(1, 4, HALF, 5000, 10, rng(3))
    assert res.rates[1] == pytest.approx(1.5, rel=0.02)
    res = run_bursty_relay(1, 3, 0, 1000, 4, rng())
    assert res.delivered == (4000, 4000)


# multicarrier and corners

@pytest.mark.parametrize("cfgs,dist", [(TOY, make_iid(2, HALF)), (TOY, make_identical(2, HALF)),
                                       (EX1, make_iid(2, HALF)), (EX2, make_iid(2, HALF))])
def test_multicarrier_rates(cfgs, dist):
    res = run_multicarrier(cfgs, dist, 2000, 10, rng(5))
    target = float(sym_capacity(cfgs, HALF))
    assert min(res.rates) >= target * 0.95
    assert max(res.rates) <= target * 1.001


def test_multicarrier_rejects_bad_dist():
    with pytest.raises(ConfigError):
        run_multicarrier(TOY, make_iid(3, HALF), 100, 2, rng())


def test_corner_d1():
    res = run_corner(EX2, make_iid(2, HALF), "D1", 5000, 20, rng(6))
    assert res.rates[0] == pytest.approx(2.5, rel=0.03)
    assert res.rates[1] == pytest.approx(2.0, rel=0.03)
    with pytest.raises(ConfigError):
        run_corner(TOY, make_iid(2, HALF), "D1", 100, 2, rng())


@pytest.mark.parametrize("cfgs,target", [([(2, 1)], "Q1"), ([(2, 1)], "Q2"), ([(3, 1)], "Q1"),
                                         ([(1, 3)], "Q1"), ([(2, 3)], "Q1")])
def test_corner_q(cfgs, target):
    dist = make_iid(1, HALF)
    res = run_corner(cfgs, dist, target, 5000, 20, rng(7))
    c = {c.label: c for c in corner_points(cfgs, HALF)}[target]
    for got, want in zip(res.rates, (float(c.r1), float(c.r2))):
        if want == 0:
            assert got == 0
        else:
            assert got == pytest.approx(want, rel=0.03)


# causality

def test_audit_toy():
    rep = causality_audit(TOY, make_iid(2, HALF), 1000, 10, seed=1)
    assert rep.ok and rep.prefix_diffs == 0 and rep.suffix_diffs > 0


@pytest.mark.parametrize("cfgs,mode", [(EX2, "symmetric"), (EX1, "symmetric"), (EX2, "corner")])
def test_audit_other_configs(cfgs, mode):
    assert causality_audit(cfgs, make_iid(2, HALF), 500, 8, seed=2, relay_mode=mode).ok


def test_audit_catches_lookahead(monkeypatch):
    # items usable from the start of their own block: combinations then
    # depend on states that have not happened yet
    monkeypatch.setattr(flows, "block_ready", lambda slots, N_B: (np.asarray(slots) // N_B) * N_B)
    rep = causality_audit(TOY, make_iid(2, HALF), 1000, 10, seed=1)
    assert not rep.ok and rep.prefix_diffs > 0


def test_decode_failure_trace(monkeypatch):
    import bursty_ic.schemes.engine as eng

    real = eng._pipe_rx

    def corrupt(lane, receiver, level, slots):
        out = real(lane, receiver, level, slots).copy()
        out[:1] += 1
        return out

    monkeypatch.setattr(eng, "_pipe_rx", corrupt)
    with pytest.raises(DecodeFailure) as exc:
        run_multicarrier(EX2, make_iid(2, HALF), 500, 4, rng())
    tr = exc.value.trace()
    assert tr["subcarrier"] is not None and tr["slot"] is not None


def test_dump_trace(tmp_path):
    import json

    S = make_iid(2, HALF)
    from bursty_ic.state_process import sample_many

    states = sample_many(S, rng(), 200)
    run = run_engine(plan_levels(TOY), states, Messages(rng(1)), 100)
    path = tmp_path / "t.jsonl"
    with open(path, "w") as fh:
        assert dump_trace(run, fh, 0, 5) == 5
    recs = [json.loads(line) for line in path.read_text().splitlines()]
    assert recs[0]["t"] == 0 and len(recs[0]["tx"][0]) == 2
    assert set(recs[3]["phase"]) <= {"F", "R"}


def test_simresult_merge():
    a = SimResult("x", (3, 4), 10)
    b = SimResult("x", (1, 1), 5)
    c = SimResult("x", (2, 0), 5)
    assert a.merge(b).merge(c).delivered == a.merge(b.merge(c)).delivered == (6, 5)
    with pytest.raises(ValueError):
        SimResult("x", (-1, 0), 1)
