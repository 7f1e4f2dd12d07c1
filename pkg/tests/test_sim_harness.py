from fractions import Fraction as F

import pytest

from bursty_ic.capacity_ld import region
from bursty_ic.sim_harness import (
    SchemeSpec,
    convergence_sweep,
    estimate_rates,
    report_row,
    rows_to_csv,
    verify_against_region,
    worker_count,
)

TOY = [(1, 1), (1, 3)]
HALF = F(1, 2)


def test_determinism():
    spec = SchemeSpec("single_weak", [(2, 1)], HALF, N=20_000)
    a = estimate_rates(spec, 3, master_seed=11)
    b = estimate_rates(spec, 3, master_seed=11)
    assert [r.delivered for r in a.results] == [r.delivered for r in b.results]
    assert report_row(a) == report_row(b)
    c = estimate_rates(spec, 3, master_seed=12)
    assert [r.delivered for r in a.results] != [r.delivered for r in c.results]


def test_seed_split_stable_across_trial_counts():
    spec = SchemeSpec("single_weak", [(1, 1)], HALF, N=5000)
    two = estimate_rates(spec, 2, 5)
    four = estimate_rates(spec, 4, 5)
    assert [r.delivered for r in four.results[:2]] == [r.delivered for r in two.results]


def test_estimate_weak_ci():
    spec = SchemeSpec("single_weak", [(2, 1)], HALF, N=200_000)
    est = estimate_rates(spec, 4, 0)
    assert est.gap() < 0.02
    assert max(est.ci) / est.mean[0] < 0.01
    assert est.failures == 0


def test_p0_zero_variance():
    est = estimate_rates(SchemeSpec("single_strong", [(2, 3)], 0, N=1000), 3, 0)
    assert est.ci == (0.0, 0.0) and est.mean == (2.0, 2.0) and est.gap() == 0


def test_verify_examples():
    reg = region(TOY, HALF)
    chk = verify_against_region((2, 2), reg)
    assert chk.passed
    assert chk.slacks["causal R1+pR2"] == F(3, 100)  # 3 - 1.5 * 1.98
    bad = verify_against_region((3, 3), reg)
    assert not bad.passed and "causal R1+pR2" in bad.violated
    assert verify_against_region((0, 0), reg).passed


def test_verify_accepts_estimates():
    spec = SchemeSpec("multicarrier", TOY, HALF, N_B=1000, blocks=6)
    est = estimate_rates(spec, 2, 0)
    assert verify_against_region(est, region(TOY, HALF)).passed
    assert all(verify_against_region(r, region(TOY, HALF)).passed for r in est.results)


def test_convergence_relay():
    spec = SchemeSpec("bursty_relay", [(1, 3)], HALF, N_B=1000, blocks=20)
    tab = convergence_sweep(spec, [1000, 10_000], trials=1, master_seed=1)
    assert tab.monotone and tab.rows[1][2] < tab.rows[0][2]


def test_convergence_toy():
    spec = SchemeSpec("multicarrier", TOY, HALF, blocks=20)
    tab = convergence_sweep(spec, [500, 5000], trials=1, master_seed=0)
    assert tab.rows[1][2] < tab.rows[0][2]


def test_convergence_p0_all_zero():
    spec = SchemeSpec("single_weak", [(2, 1)], 0)
    tab = convergence_sweep(spec, [100, 200, 400])
    assert [g for _, _, g in tab.rows] == [0, 0, 0] and tab.monotone
    with pytest.raises(ValueError):
        convergence_sweep(spec, [100])


def test_report_columns():
    est = estimate_rates(SchemeSpec("single_weak", [(1, 1)], HALF, N=10_000), 2, 0)
    row = report_row(est)
    assert list(row) == ["scheme", "M", "n", "k", "p", "dist-kind", "N_B", "blocks", "trials",
                         "mean_r1", "mean_r2", "ci", "formula_r1", "formula_r2", "gap",
                         "verdict"]
    assert rows_to_csv([row]).splitlines()[0].startswith("scheme,M,n,k")


def test_spec_validation(monkeypatch):
    with pytest.raises(ValueError):
        SchemeSpec("nope", TOY)
    with pytest.raises(ValueError):
        SchemeSpec("corner", TOY)
    with pytest.raises(ValueError):
        estimate_rates(SchemeSpec("single_weak", [(1, 1)]), 0)
    monkeypatch.setenv("BIL_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("BIL_THREADS", "x")
    assert worker_count() == 1


def test_parallel_matches_serial():
    spec = SchemeSpec("single_weak", [(1, 1)], HALF, N=2000)
    a = estimate_rates(spec, 2, 3, workers=1)
    b = estimate_rates(spec, 2, 3, workers=2)
    assert a.mean == b.mean
