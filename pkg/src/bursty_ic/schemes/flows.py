"""Single-position pipes carrying MDS-coded item streams.

A pipe is one transmit level that reaches some receiver only in slots where
the relevant interference state is on. Items are grouped into generations of
``G``; the sender transmits combinations of its current generation and moves
on once ``G`` of them have been received. Receptions are known to the sender
through the state feedback of the previous slot, so no combination is wasted.

Items become available at block boundaries (or are unlimited for fresh
streams); availability is counted in whole generations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gf import DEFAULT_PRIME
from .mds import combine_batch, recover_batch

UNLIMITED = np.iinfo(np.int64).max // 4


@dataclass
class Schedule:
    G: int
    tx_slots: np.ndarray
    tx_gens: np.ndarray
    tx_points: np.ndarray
    recv_mask: np.ndarray  # over tx entries

    @property
    def n_gens(self) -> int:
        return int(self.tx_gens.max()) + 1 if len(self.tx_gens) else 0

    @property
    def recv_slots(self) -> np.ndarray:
        return self.tx_slots[self.recv_mask]


def avail_from_ready(ready: np.ndarray, N: int, G: int) -> np.ndarray:
    """Items (in whole generations) available at each slot, given sorted
    per-item ready slots."""
    counts = np.searchsorted(np.sort(ready), np.arange(N), side="right")
    return (counts // G) * G


def block_ready(slots: np.ndarray, N_B: int) -> np.ndarray:
    """An item produced in a block is usable from the next block's start."""
    return (np.asarray(slots) // N_B + 1) * N_B


def schedule(avail: np.ndarray, act: np.ndarray, rx: np.ndarray, G: int) -> Schedule:
    """Delivered-count recursion ``R_t = min(R_{t-1} + act_t rx_t, A_t)``,
    solved in closed form; the sender transmits whenever it has backlog."""
    act = np.asarray(act, dtype=bool)
    rx = np.asarray(rx, dtype=bool)
    avail = np.asarray(avail, dtype=np.int64)
    c = np.cumsum(act & rx, dtype=np.int64)
    r = c + np.minimum(0, np.minimum.accumulate(avail - c))
    r_prev = np.concatenate([[0], r[:-1]])
    tx = act & (avail > r_prev)
    slots = np.nonzero(tx)[0]
    gens = r_prev[slots] // G
    first = np.searchsorted(gens, gens, side="left")
    points = np.arange(len(slots)) - first + 1
    return Schedule(G, slots, gens, points.astype(np.int64), rx[slots])


def encode(items: np.ndarray, sched: Schedule, p: int = DEFAULT_PRIME) -> np.ndarray:
    items = np.asarray(items, dtype=np.int64)
    coeffs = items[: len(items) // sched.G * sched.G].reshape(-1, sched.G)
    return combine_batch(coeffs, sched.tx_gens, sched.tx_points, p)


@dataclass
class Decoded:
    gens: np.ndarray  # complete generation ids, ascending
    items: np.ndarray  # (len(gens), G)
    done_slots: np.ndarray  # slot of each generation's last reception

    def flat(self) -> tuple[np.ndarray, np.ndarray]:
        """(item indices, values) for all recovered items."""
        G = self.items.shape[1] if self.items.ndim == 2 else 0
        idx = (self.gens[:, None] * G + np.arange(G)[None, :]).ravel()
        return idx, self.items.ravel()


def decode(sched: Schedule, values: np.ndarray, p: int = DEFAULT_PRIME) -> Decoded:
    """Recover every generation with ``G`` receptions. ``values`` are the
    observed combinations at ``sched.recv_slots``."""
    G = sched.G
    gens = sched.tx_gens[sched.recv_mask]
    points = sched.tx_points[sched.recv_mask]
    slots = sched.recv_slots
    if len(gens) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return Decoded(empty, np.zeros((0, G), dtype=np.int64), empty)
    counts = np.bincount(gens)
    if counts.max() > G:
        raise RuntimeError("generation received more combinations than symbols")
    complete = np.nonzero(counts == G)[0]
    sel = np.isin(gens, complete)
    pts = points[sel].reshape(-1, G)
    vals = np.asarray(values, dtype=np.int64)[sel].reshape(-1, G)
    items = recover_batch(pts, vals, p)
    done = slots[sel].reshape(-1, G)[:, -1]
    return Decoded(complete, items, done)
