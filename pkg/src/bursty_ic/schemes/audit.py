"""Causality checker for the engine.

Two runs share everything up to slot ``t0``: the same states before ``t0``
and the same payload committed by then. After that, states, fresh level
symbols and not-yet-started relay generations are redrawn. A causal scheme
must produce identical transmit signals on every slot up to and including
``t0``, since nothing it may depend on has changed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..gf import DEFAULT_PRIME
from ..state_process import sample_many
from .engine import DEFAULT_GEN, Messages, run_engine
from .plan import plan_levels


@dataclass
class AuditReport:
    t0: int
    slots: int
    prefix_diffs: int
    suffix_diffs: int
    learned_mismatch: int
    per_subcarrier: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        # the suffix must actually change, else the audit proves nothing
        return self.prefix_diffs == 0 and self.learned_mismatch == 0 and self.suffix_diffs > 0


def _started_gens(run, key, t0) -> int:
    for rec in run.flows:
        if rec.kind == "originate" and rec.key == key:
            early = rec.sched.tx_gens[rec.sched.tx_slots <= t0]
            return int(early.max()) + 1 if early.size else 0
    return 0


def causality_audit(cfgs, dist, N_B: int, blocks: int, t0: int | None = None,
                    seed: int = 0, relay_mode: str = "symmetric", leader: int = 0,
                    G: int = DEFAULT_GEN, p: int = DEFAULT_PRIME) -> AuditReport:
    N = N_B * blocks
    if t0 is None:
        t0 = N // 2 + N_B // 3
    ss = np.random.SeedSequence(seed)
    s_state, s_msg, s_alt = ss.spawn(3)
    S = sample_many(dist, np.random.default_rng(s_state), N)
    plan = plan_levels(cfgs)
    m1 = Messages(np.random.default_rng(s_msg), p)
    run1 = run_engine(plan, S, m1, N_B, relay_mode, leader, G, p)

    alt = np.random.default_rng(s_alt)
    S2 = S.copy()
    S2[t0:] = sample_many(dist, alt, N - t0)
    m2 = Messages(alt, p)
    for sub, arr in m1.fresh_arrays.items():
        new = arr.copy()
        new[:, t0 + 1:] = alt.integers(0, p, size=new[:, t0 + 1:].shape)
        m2.fresh_arrays[sub] = new
    for key, arr in m1.item_arrays.items():
        keep = _started_gens(run1, key, t0) * G
        new = arr.copy()
        new[keep:] = alt.integers(0, p, size=len(new) - keep)
        m2.item_arrays[key] = new
    run2 = run_engine(plan, S2, m2, N_B, relay_mode, leader, G, p)

    pre = post = 0
    per = []
    for l1, l2 in zip(run1.lanes, run2.lanes):
        d = l1.X != l2.X
        a = int(np.count_nonzero(d[:, : t0 + 1]))
        b = int(np.count_nonzero(d[:, t0 + 1:]))
        per.append({"subcarrier": l1.layout.index + 1, "prefix_diffs": a, "suffix_diffs": b})
        pre += a
        post += b
    return AuditReport(t0, N, pre, post, run1.learned_mismatch + run2.learned_mismatch, per)
