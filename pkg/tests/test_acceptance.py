"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Every test prints one ``PASS``/``FAIL criterion N`` line. Simulation results
from criteria 4-6 are cached so criteria 7 and 9 check the same runs.
"""

import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from bursty_ic import capacity_ld as cl
from bursty_ic import gn_analysis as gn
from bursty_ic.schemes import causality_audit
from bursty_ic.sim_harness import SchemeSpec, estimate_rates, verify_against_region
from bursty_ic.state_process import (
    JointStateDistribution,
    fractional_partition,
    make_identical,
    make_iid,
    validate,
)

HALF = F(1, 2)
TOY = [(1, 1), (1, 3)]
EX1 = [(2, 2), (1, 3)]
EX2 = [(1, 1), (1, 4)]
TRIALS = 10

RUNS: dict = {}


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail

    return emit


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_criterion_1_formula_pins(report):
    def body():
        return [
            (cl.delta(TOY), cl.sym_capacity(TOY, HALF)),
            (cl.delta(EX1), cl.sym_capacity(EX1, HALF)),
            (cl.delta(EX2), cl.sym_capacity(EX2, HALF)),
        ]

    got, dt = _timed(body)
    want = [(0, F(2)), (-1, F(8, 3)), (1, F(9, 4))]
    exact = all(isinstance(c, F) for _, c in got)
    report(1, got == want and exact and dt < 1.0,
           f"(delta, C_sym) = {[(d, str(c)) for d, c in got]}, {dt:.3f}s")


def test_criterion_2_gdof_pins(report):
    cases = [((1,), F(2, 3)), ((3,), F(5, 4)), ((1, 3), F(1))]
    got = [gn.gdof(gn.GdofProfile(b, HALF)) for b, _ in cases]
    report(2, got == [w for _, w in cases], f"gdof = {[str(g) for g in got]}")


def test_criterion_3_gdof_ld_equivalence(report):
    def body():
        rng = np.random.default_rng(2024)
        ps = [F(0), F(1, 4), F(1, 2), F(2, 3), F(1)]
        bad = 0
        for _ in range(200):
            M = int(rng.integers(1, 5))
            bs = [F(int(rng.integers(0, 4 * d + 1)), d)
                  for d in rng.integers(1, 7, size=M).tolist()]
            n = math.lcm(*[b.denominator for b in bs])
            cfgs = [(n, int(b * n)) for b in bs]
            for p in ps:
                if gn.gdof(gn.GdofProfile(bs, p)) != cl.sym_capacity(cfgs, p) / (M * n):
                    bad += 1
        return bad

    bad, dt = _timed(body)
    report(3, bad == 0 and dt < 5.0, f"1000 cases, {bad} mismatches, {dt:.2f}s")


def _run_specs(specs, seed):
    out = []
    for name, spec, tol in specs:
        est = estimate_rates(spec, TRIALS, seed)
        RUNS[name] = est
        out.append((name, est, tol))
    return out


def _gap_lines(rows):
    lines, ok = [], True
    for name, est, tol in rows:
        g = est.gap()
        ok &= g <= tol
        lines.append(f"{name} mean=({est.mean[0]:.4f},{est.mean[1]:.4f}) gap={g:.2%}")
    return ok, "; ".join(lines)


def test_criterion_4_single_carrier(report):
    specs = [
        ("weak(2,1)", SchemeSpec("single_weak", [(2, 1)], HALF, N=200_000), 0.02),
        ("weak(1,1)", SchemeSpec("single_weak", [(1, 1)], HALF, N=200_000), 0.02),
        ("strong(2,3)", SchemeSpec("single_strong", [(2, 3)], HALF, N=200_000), 0.02),
        ("relay(1,3)", SchemeSpec("bursty_relay", [(1, 3)], HALF, N_B=10_000, blocks=20), 0.02),
    ]
    rows, dt = _timed(lambda: _run_specs(specs, 4))
    ok, detail = _gap_lines(rows)
    report(4, ok and dt < 30.0, f"{detail}; {dt:.1f}s")


def test_criterion_5_multicarrier(report):
    def mc(cfgs, dist):
        return SchemeSpec("multicarrier", cfgs, HALF, dist=dist, N_B=5000, blocks=20)

    specs = [
        ("toy-iid", mc(TOY, make_iid(2, HALF)), 0.03),
        ("toy-identical", mc(TOY, make_identical(2, HALF)), 0.03),
        ("example1", mc(EX1, make_iid(2, HALF)), 0.03),
        ("example2", mc(EX2, make_iid(2, HALF)), 0.03),
    ]
    rows, dt = _timed(lambda: _run_specs(specs, 5))
    ok, detail = _gap_lines(rows)
    report(5, ok and dt < 60.0, f"{detail}; {dt:.1f}s")


def test_criterion_6_corners(report):
    specs = [
        ("D1-example2", SchemeSpec("corner", EX2, HALF, N_B=5000, blocks=20, target="D1"), 0.03),
        ("Q1-(2,1)", SchemeSpec("corner", [(2, 1)], HALF, N_B=5000, blocks=20, target="Q1"), 0.03),
    ]
    rows, dt = _timed(lambda: _run_specs(specs, 6))
    ok, detail = _gap_lines(rows)
    report(6, ok, f"{detail}; {dt:.1f}s")


def test_criterion_7_soundness(report):
    if not RUNS:
        pytest.skip("needs criteria 4-6 in the same session")
    checked, bad = 0, []
    for name, est in RUNS.items():
        reg = cl.region(est.spec.cfgs, est.spec.p)
        for r in est.results:
            chk = verify_against_region(r, reg, F(1, 100))
            checked += 1
            if not chk.passed:
                bad.append((name, chk.violated))
    report(7, not bad and checked == len(RUNS) * TRIALS,
           f"{checked} runs inside the region after 1% shrink; violations {bad}")


def _random_equal_marginal(rng):
    """Random rational pmf averaged over cyclic shifts of the coordinates, so
    every marginal is the same."""
    M = int(rng.integers(1, 5))
    states = [format(i, f"0{M}b") for i in range(2**M)]
    w = {s: F(int(rng.integers(0, 10))) for s in states}
    if sum(w.values()) == 0 or all(w[s] == 0 for s in states if "1" in s):
        w["1" * M] += 1
    tot = sum(w.values())
    pmf = {s: F(0) for s in states}
    for s, v in w.items():
        for r in range(M):
            pmf[s[r:] + s[:r]] += v / tot / M
    p = sum(v for s, v in pmf.items() if s[0] == "1")
    return JointStateDistribution(M, pmf, p)


def test_criterion_8_fractional_partition(report):
    def body():
        rng = np.random.default_rng(8)
        bad = 0
        for _ in range(200):
            d = _random_equal_marginal(rng)
            assert validate(d)
            part = fractional_partition(d)
            if not all(v == 1 and isinstance(v, F) for v in part.column_sums.values()):
                bad += 1
        return bad

    bad, dt = _timed(body)
    report(8, bad == 0 and dt < 2.0, f"200 pmfs, {bad} failing column sums, {dt:.2f}s")


def test_criterion_9_no_failures_and_causality(report):
    failures = sum(est.failures for est in RUNS.values())
    audit = causality_audit(TOY, make_iid(2, HALF), N_B=1000, blocks=10, seed=9)
    ok = bool(RUNS) and failures == 0 and audit.ok and audit.slots == 10_000
    report(9, ok,
           f"{sum(e.trials for e in RUNS.values())} runs, {failures} decode failures; "
           f"audit t0={audit.t0} prefix_diffs={audit.prefix_diffs} "
           f"suffix_diffs={audit.suffix_diffs} learned_mismatch={audit.learned_mismatch}")
