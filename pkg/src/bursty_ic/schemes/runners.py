"""Entry points that run one trial of each scheme and return a SimResult."""

from __future__ import annotations

import numpy as np

from ..gf import DEFAULT_PRIME
from ..ld_channel import ConfigError, SubcarrierConfig, make_configs
from ..results import SimResult
from ..state_process import JointStateDistribution, make_iid, sample_many, validate
from .engine import DEFAULT_GEN, Messages, run_engine
from .plan import plan_levels
from .separation import run_separation


def _result(name, delivered, N, rng_seed=None, **details) -> SimResult:
    return SimResult(name, (int(delivered[0]), int(delivered[1])), N, 0, rng_seed, details)


def _single(n, k, p, N, rng, name, field):
    dist = make_iid(1, p)
    S = sample_many(dist, rng, N)
    plan = plan_levels([(n, k)])
    run = run_engine(plan, S, Messages(rng, field), N_B=max(N, 1), p=field)
    lane = run.lanes[0]
    f_frac = float(np.mean(~lane.R)) if N else 0.0
    return _result(name, run.delivered, N, f_occupancy=f_frac,
                   learned_mismatch=run.learned_mismatch)


def run_single_weak(n: int, k: int, p, N: int, rng: np.random.Generator,
                    field: int = DEFAULT_PRIME) -> SimResult:
    if not 0 <= k <= n or n < 1:
        raise ConfigError("weak scheme needs 0 <= k <= n, n >= 1")
    if N < 1:
        raise ValueError("N must be positive")
    return _single(n, k, p, N, rng, "single_weak", field)


def run_single_strong(n: int, k: int, p, N: int, rng: np.random.Generator,
                      field: int = DEFAULT_PRIME) -> SimResult:
    if not n < k <= 2 * n:
        raise ConfigError("strong scheme needs n < k <= 2n")
    if N < 1:
        raise ValueError("N must be positive")
    return _single(n, k, p, N, rng, "single_strong", field)


def run_bursty_relay(n: int, k: int, p, N_B: int, blocks: int, rng: np.random.Generator,
                     G: int = DEFAULT_GEN, field: int = DEFAULT_PRIME) -> SimResult:
    if not k > 2 * n or n < 1:
        raise ConfigError("bursty relaying needs k > 2n")
    if blocks < 2 or N_B < 1:
        raise ValueError("need at least two blocks")
    N = N_B * blocks
    S = sample_many(make_iid(1, p), rng, N)
    run = run_engine(plan_levels([(n, k)]), S, Messages(rng, field), N_B, G=G, p=field)
    return _result("bursty_relay", run.delivered, N, **run.breakdown)


def _states(cfgs, dist: JointStateDistribution, N, rng):
    if dist.M != len(cfgs):
        raise ConfigError("distribution M does not match number of subcarriers")
    if not validate(dist):
        raise ConfigError("; ".join(validate(dist).messages))
    return sample_many(dist, rng, N)


def run_multicarrier(cfgs, dist: JointStateDistribution, N_B: int, blocks: int,
                     rng: np.random.Generator, G: int = DEFAULT_GEN,
                     field: int = DEFAULT_PRIME) -> SimResult:
    cfgs = make_configs(cfgs)
    N = N_B * blocks
    S = _states(cfgs, dist, N, rng)
    plan = plan_levels(cfgs)
    run = run_engine(plan, S, Messages(rng, field), N_B, G=G, p=field)
    return _result("multicarrier", run.delivered, N, **run.breakdown)


def run_corner(cfgs, dist: JointStateDistribution, target: str, N_B: int, blocks: int,
               rng: np.random.Generator, G: int = DEFAULT_GEN,
               field: int = DEFAULT_PRIME) -> SimResult:
    cfgs = make_configs(cfgs)
    target = target.upper()
    if target not in ("D1", "D2", "Q1", "Q2"):
        raise ConfigError(f"unknown corner {target!r}")
    leader = 0 if target.endswith("1") else 1
    N = N_B * blocks
    S = _states(cfgs, dist, N, rng)
    if target.startswith("D"):
        plan = plan_levels(cfgs)
        if plan.delta <= 0:
            raise ConfigError("D1/D2 exist only when delta > 0")
        run = run_engine(plan, S, Messages(rng, field), N_B, relay_mode="corner",
                         leader=leader, G=G, p=field)
        return _result(f"corner_{target}", run.delivered, N, **run.breakdown)
    delivered, _ = run_separation(cfgs, S, Messages(rng, field), leader, N_B, G, field)
    return _result(f"corner_{target}", delivered, N)
