"""Seeded Monte Carlo orchestration, region checks and convergence sweeps."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .capacity_ld import RateRegion, contains, corner_points, region, sym_capacity
from .ld_channel import make_configs
from .results import DecodeFailure, SimResult
from .schemes import runners
from .state_process import JointStateDistribution, make_identical, make_iid, to_fraction

__all__ = [
    "SchemeSpec", "RateEstimate", "RegionCheck", "SimResult", "DecodeFailure",
    "estimate_rates", "verify_against_region", "convergence_sweep", "report_row",
    "rows_to_csv", "worker_count",
]

SCHEMES = ("single_weak", "single_strong", "bursty_relay", "multicarrier", "corner")
Z95 = 1.959963984540054


@dataclass
class SchemeSpec:
    scheme: str
    cfgs: list
    p: Fraction = Fraction(1, 2)
    dist_kind: str = "iid"
    dist: JointStateDistribution | None = None
    N: int = 200_000
    N_B: int = 5000
    blocks: int = 20
    target: str | None = None
    G: int = 32

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        self.cfgs = [tuple(c) for c in self.cfgs]
        make_configs(self.cfgs)
        self.p = to_fraction(self.dist.p if self.dist is not None else self.p)
        if self.dist is not None:
            self.dist_kind = self.dist.kind
        if self.scheme == "corner" and self.target is None:
            raise ValueError("corner scheme needs a target")

    @property
    def M(self) -> int:
        return len(self.cfgs)

    @property
    def slots(self) -> int:
        if self.scheme in ("single_weak", "single_strong"):
            return self.N
        return self.N_B * self.blocks

    def distribution(self) -> JointStateDistribution:
        if self.dist is not None:
            return self.dist
        maker = make_identical if self.dist_kind == "identical" else make_iid
        return maker(self.M, self.p)

    def formula(self) -> tuple[Fraction, Fraction]:
        if self.scheme == "corner":
            pts = {c.label: c for c in corner_points(self.cfgs, self.p)}
            c = pts[self.target.upper()]
            return (Fraction(c.r1), Fraction(c.r2))
        c = sym_capacity(self.cfgs, self.p)
        return (c, c)

    def sized(self, size: int) -> "SchemeSpec":
        """Copy with the run length replaced (N for single-carrier phase
        schemes, N_B otherwise)."""
        kw = dict(self.__dict__)
        if self.scheme in ("single_weak", "single_strong"):
            kw["N"] = size
        else:
            kw["N_B"] = size
        return SchemeSpec(**kw)

    def run(self, rng: np.random.Generator) -> SimResult:
        s = self.scheme
        if s in ("single_weak", "single_strong"):
            (n, k), = self.cfgs
            fn = runners.run_single_weak if s == "single_weak" else runners.run_single_strong
            return fn(n, k, self.p, self.N, rng)
        if s == "bursty_relay":
            (n, k), = self.cfgs
            return runners.run_bursty_relay(n, k, self.p, self.N_B, self.blocks, rng, self.G)
        if s == "multicarrier":
            return runners.run_multicarrier(self.cfgs, self.distribution(), self.N_B,
                                            self.blocks, rng, self.G)
        return runners.run_corner(self.cfgs, self.distribution(), self.target, self.N_B,
                                  self.blocks, rng, self.G)

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme, "cfgs": [list(c) for c in self.cfgs], "p": str(self.p),
            "dist_kind": self.dist_kind, "N": self.N, "N_B": self.N_B,
            "blocks": self.blocks, "target": self.target,
        }


def worker_count(default: int = 1) -> int:
    raw = os.environ.get("BIL_THREADS")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def _trial(args) -> SimResult:
    spec, seq = args
    res = spec.run(np.random.default_rng(seq))
    res.seed = [int(seq.entropy), list(seq.spawn_key)]
    return res


@dataclass
class RateEstimate:
    spec: SchemeSpec
    master_seed: int
    mean: tuple[float, float]
    ci: tuple[float, float]
    results: list[SimResult] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.results)

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.results)

    def gap(self) -> float:
        """Largest relative deviation from the formula over both users; for a
        zero target the absolute deviation is used."""
        gaps = []
        for m, f in zip(self.mean, self.spec.formula()):
            f = float(f)
            gaps.append(abs(m - f) / f if f > 0 else abs(m))
        return max(gaps)


def estimate_rates(spec: SchemeSpec, trials: int, master_seed: int = 0,
                   workers: int | None = None) -> RateEstimate:
    """Run ``trials`` independent trials from per-trial seed streams spawned
    off ``master_seed``; 95% normal-approximation CI across trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seqs = np.random.SeedSequence(master_seed).spawn(trials)
    workers = worker_count() if workers is None else workers
    jobs = [(spec, s) for s in seqs]
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=min(workers, trials)) as ex:
            results = list(ex.map(_trial, jobs))
    else:
        results = [_trial(j) for j in jobs]
    rates = np.array([r.rates for r in results])
    mean = rates.mean(axis=0)
    if trials > 1:
        half = Z95 * rates.std(axis=0, ddof=1) / np.sqrt(trials)
    else:
        half = np.zeros(2)
    return RateEstimate(spec, master_seed, (float(mean[0]), float(mean[1])),
                        (float(half[0]), float(half[1])), results)


@dataclass
class RegionCheck:
    passed: bool
    point: tuple
    slacks: dict
    violated: list


def verify_against_region(result, reg: RateRegion, margin=Fraction(1, 100)) -> RegionCheck:
    """Shrink the empirical pair by ``(1 - margin)`` and test membership."""
    if isinstance(result, SimResult):
        r1, r2 = result.exact_rates
    elif isinstance(result, RateEstimate):
        r1, r2 = (to_fraction(x) for x in result.mean)
    else:
        r1, r2 = (to_fraction(x) for x in result)
    shrink = 1 - to_fraction(margin)
    pt = (r1 * shrink, r2 * shrink)
    ok, slacks = contains(reg, *pt)
    violated = [k for k, v in slacks.items() if v < 0]
    return RegionCheck(ok, pt, slacks, violated)


@dataclass
class SweepTable:
    rows: list[tuple[int, float, float]]
    monotone: bool


def convergence_sweep(spec: SchemeSpec, sizes, trials: int = 1, master_seed: int = 0) -> SweepTable:
    """Gap to the formula for each run length; ``monotone`` tolerates one
    inversion caused by noise."""
    sizes = list(sizes)
    if len(sizes) < 2:
        raise ValueError("need at least two sizes")
    rows = []
    for size in sizes:
        est = estimate_rates(spec.sized(size), trials, master_seed)
        rows.append((size, est.mean[0], est.gap()))
    gaps = [g for _, _, g in rows]
    inversions = sum(1 for a, b in zip(gaps, gaps[1:]) if b > a)
    return SweepTable(rows, inversions <= 1 and gaps[-1] <= gaps[0])


def default_tolerance(spec: SchemeSpec) -> float:
    return 0.02 if spec.scheme in ("single_weak", "single_strong", "bursty_relay") else 0.03


def report_row(est: RateEstimate, tolerance: float | None = None,
               margin=Fraction(1, 100)) -> dict:
    spec = est.spec
    tol = default_tolerance(spec) if tolerance is None else tolerance
    f1, f2 = spec.formula()
    reg = region(spec.cfgs, spec.p)
    sound = all(verify_against_region(r, reg, margin).passed for r in est.results)
    ok = est.gap() <= tol and sound and est.failures == 0
    return {
        "scheme": spec.scheme if spec.target is None else f"{spec.scheme}:{spec.target}",
        "M": spec.M,
        "n": [c[0] for c in spec.cfgs],
        "k": [c[1] for c in spec.cfgs],
        "p": str(spec.p),
        "dist-kind": spec.dist_kind,
        "N_B": spec.N_B if spec.scheme not in ("single_weak", "single_strong") else None,
        "blocks": spec.blocks if spec.scheme not in ("single_weak", "single_strong") else None,
        "trials": est.trials,
        "mean_r1": est.mean[0],
        "mean_r2": est.mean[1],
        "ci": max(est.ci),
        "formula_r1": str(f1),
        "formula_r2": str(f2),
        "gap": est.gap(),
        "verdict": "pass" if ok else "fail",
    }


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]))
    w.writeheader()
    for r in rows:
        w.writerow({k: (" ".join(map(str, v)) if isinstance(v, list) else v) for k, v in r.items()})
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2)
