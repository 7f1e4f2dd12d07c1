"""Per-subcarrier phase F / R machines, vectorized over slots.

Every subcarrier is a lane. Slots are grouped into cycles: an F slot alone,
or an interfered F slot followed by its R slot. The receiver's view of one
cycle is a small linear system; it is built symbolically once per cycle type
and solved with RREF, then applied to all cycles of that type with one
matrix product. Rows on helped levels and on pipe levels are left out of the
symbolic system and handled by the helping flows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..gf import DEFAULT_PRIME, matmul, solve_targets
from ..ld_channel import extract_interference, transfer
from ..results import DecodeFailure
from .plan import LanePlan

# scale applied by user 2 to its phase-R retransmission when the effective
# strengths are equal; any constant outside {0, 1} keeps the R-slot pair solvable
THETA = 2


def _zb(levels) -> tuple[int, ...]:
    return tuple(l - 1 for l in levels)


@dataclass(frozen=True)
class LaneLayout:
    index: int
    n: int
    k: int
    active: bool
    f_fresh: tuple
    r_fresh: tuple
    r_dest: tuple
    r_src: tuple
    coef: tuple
    helped_tx: tuple
    helped_rx: tuple
    sources: tuple
    pipe_levels: tuple
    obs_rows: tuple

    @property
    def q(self) -> int:
        return max(self.n, self.k)

    @property
    def cfg(self):
        from ..ld_channel import SubcarrierConfig

        return SubcarrierConfig(self.n, self.k)


def layout_for(lane: LanePlan) -> LaneLayout:
    n, k, h = lane.n, lane.k, lane.h
    active = lane.phase_active
    r_fresh: tuple = ()
    r_move: tuple = ()
    coef = (1, 1)
    if active and lane.regime == "weak":
        ke = lane.k_eff
        r_move = tuple(range(ke))
        r_fresh = tuple(range(ke, n))
        if ke == lane.n_eff:
            coef = (1, THETA)
    elif active:
        r_move = tuple(range(k - n + h, n))
        r_fresh = tuple(range(k - n + h))
    helped_rx = _zb(lane.helped_rx_levels)
    pipes = _zb(lane.helper_levels)
    skip = set(helped_rx) | set(pipes)
    rows = tuple(r for r in range(lane.q) if r not in skip)
    return LaneLayout(
        lane.index, n, k, active,
        _zb(lane.fresh_levels), r_fresh, r_move, r_move, coef,
        _zb(lane.helped_tx_levels), helped_rx, _zb(lane.source_levels),
        pipes, rows,
    )


def phase_r(S: np.ndarray) -> np.ndarray:
    """Mask of R slots: an interfered F slot is followed by R, and R always
    returns to F."""
    S = np.asarray(S, dtype=bool)
    N = len(S)
    idx = np.arange(N)
    prev = np.concatenate([[False], S[:-1]])
    starts = np.where(S & ~prev, idx, 0)
    offset = idx - np.maximum.accumulate(starts)
    trigger = S & (offset % 2 == 0)
    R = np.zeros(N, dtype=bool)
    R[1:] = trigger[:-1]
    return R


@dataclass
class LaneSignals:
    layout: LaneLayout
    S: np.ndarray
    R: np.ndarray
    X: np.ndarray  # (2, N, q)
    Y: np.ndarray  # (2, N, q)
    learned_mismatch: int = 0

    def refresh(self, p: int = DEFAULT_PRIME) -> None:
        cfg = self.layout.cfg
        for u in (0, 1):
            self.Y[u] = transfer(cfg, self.X[u], self.X[1 - u], self.S, p)


def lane_signals(layout: LaneLayout, S: np.ndarray, fresh: np.ndarray,
                 p: int = DEFAULT_PRIME) -> LaneSignals:
    """Transmit signals for both users. R contents come from each
    transmitter's own feedback of the previous slot."""
    cfg = layout.cfg
    S = np.asarray(S, dtype=bool)
    N, q = len(S), layout.q
    R = phase_r(S) if layout.active else np.zeros(N, dtype=bool)
    X = np.zeros((2, N, q), dtype=np.int64)
    fi = np.nonzero(~R)[0]
    ff = list(layout.f_fresh)
    for u in (0, 1):
        X[u][np.ix_(fi, ff)] = fresh[u][np.ix_(fi, ff)]
    ri = np.nonzero(R)[0]
    mismatch = 0
    if ri.size:
        prev = ri - 1
        rf = list(layout.r_fresh)
        learned = []
        for u in (0, 1):
            y_fb = transfer(cfg, X[u][prev], X[1 - u][prev], S[prev], p)
            learned.append(extract_interference(cfg, y_fb, X[u][prev], p))
        for u in (0, 1):
            truth = X[1 - u][prev][:, : layout.k]
            mismatch += int(np.count_nonzero(learned[u][:, : layout.k] != truth))
            X[u][np.ix_(ri, rf)] = fresh[u][np.ix_(ri, rf)]
            moved = learned[u][:, list(layout.r_src)] * layout.coef[u] % p
            X[u][np.ix_(ri, list(layout.r_dest))] = moved
    sig = LaneSignals(layout, S, R, X, np.zeros_like(X), mismatch)
    sig.refresh(p)
    return sig


@lru_cache(maxsize=256)
def cycle_model(layout: LaneLayout, sF: int, sR, p: int = DEFAULT_PRIME):
    """Per receiving user: (D, phase offsets, levels) so that
    ``obs @ D.T`` yields the decodable own fresh symbols of one cycle."""
    cfg = layout.cfg
    q = layout.q
    with_r = sR is not None
    nf = len(layout.f_fresh)
    nr = len(layout.r_fresh) if with_r else 0
    per = nf + nr
    nv = 2 * per
    XF = np.zeros((2, nv, q), dtype=np.int64)
    XR = np.zeros((2, nv, q), dtype=np.int64)
    meta = []  # (user, phase, level) per variable
    for u in (0, 1):
        for i, lvl in enumerate(layout.f_fresh):
            XF[u, u * per + i, lvl] = 1
            meta.append((u, 0, lvl))
        for i, lvl in enumerate(layout.r_fresh[:nr]):
            XR[u, u * per + nf + i, lvl] = 1
            meta.append((u, 1, lvl))
    if with_r:
        for u in (0, 1):
            for d, s in zip(layout.r_dest, layout.r_src):
                XR[u][:, d] = layout.coef[u] * XF[1 - u][:, s] % p
    rows = list(layout.obs_rows)
    out = []
    helped = set(layout.helped_tx)
    for u in (0, 1):
        blocks = [transfer(cfg, XF[u], XF[1 - u], sF, p)[:, rows].T]
        if with_r:
            blocks.append(transfer(cfg, XR[u], XR[1 - u], sR, p)[:, rows].T)
        H = np.vstack(blocks)
        targets = [v for v, (uu, _, lvl) in enumerate(meta) if uu == u and lvl not in helped]
        D, solv = solve_targets(H, targets, p)
        phases = np.array([meta[v][1] for v in solv], dtype=np.int64)
        levels = np.array([meta[v][2] for v in solv], dtype=np.int64)
        out.append((D, phases, levels))
    return out


def _cycles(sig: LaneSignals):
    """Yield (sF, sR, F-slot indices) per cycle type."""
    F = np.nonzero(~sig.R)[0]
    N = len(sig.S)
    nxt = np.minimum(F + 1, N - 1)
    has_r = (F + 1 < N) & sig.R[nxt]
    sF = sig.S[F]
    sR = sig.S[nxt]
    for a in (0, 1):
        sel = F[(~has_r) & (sF == a)]
        if sel.size:
            yield a, None, sel
        for b in (0, 1):
            sel = F[has_r & (sF == a) & (sR == b)]
            if sel.size:
                yield a, b, sel


def lane_decode(sig: LaneSignals, helper: dict | None = None,
                p: int = DEFAULT_PRIME) -> np.ndarray:
    """Count correctly decoded own fresh symbols per user.

    ``helper[(u, i)] = (slots, values)`` holds the interference recovered by
    receiver ``u`` on helped pair ``i``. A decoded value that differs from the
    transmitted one raises DecodeFailure.
    """
    lay = sig.layout
    rows = list(lay.obs_rows)
    counts = np.zeros(2, dtype=np.int64)
    for sF, sR, fslots in _cycles(sig):
        models = cycle_model(lay, int(sF), None if sR is None else int(sR), p)
        for u in (0, 1):
            D, phases, levels = models[u]
            if len(levels) == 0:
                continue
            obs = sig.Y[u][fslots][:, rows]
            if sR is not None:
                obs = np.hstack([obs, sig.Y[u][fslots + 1][:, rows]])
            dec = matmul(obs, D.T, p)
            truth = sig.X[u][fslots[:, None] + phases[None, :], levels[None, :]]
            bad = np.nonzero(dec != truth)
            if bad[0].size:
                c, t = bad[0][0], bad[1][0]
                raise DecodeFailure(
                    "lane decode mismatch", slot=int(fslots[c] + phases[t]),
                    subcarrier=lay.index, level=int(levels[t]) + 1, user=u,
                )
            counts[u] += dec.size
    helper = helper or {}
    for i, (tl, rr) in enumerate(zip(lay.helped_tx, lay.helped_rx)):
        for u in (0, 1):
            y = sig.Y[u][:, rr]
            truth = sig.X[u][:, tl]
            clean = np.nonzero(~sig.S)[0]
            got = [y[clean]]
            want = [truth[clean]]
            slots = [clean]
            if (u, i) in helper:
                hs, hv = helper[(u, i)]
                got.append((y[hs] - hv) % p)
                want.append(truth[hs])
                slots.append(hs)
            got = np.concatenate(got)
            want = np.concatenate(want)
            bad = np.nonzero(got != want)[0]
            if bad.size:
                raise DecodeFailure(
                    "helped level mismatch", slot=int(np.concatenate(slots)[bad[0]]),
                    subcarrier=lay.index, level=tl + 1, user=u,
                )
            counts[u] += got.size
    return counts
