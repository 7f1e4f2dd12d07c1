"""Multicarrier engine: lanes plus helping and relaying flows.

Order of computation per run (each step only reads what its senders could
have known at the time they transmit):

1. lane signals for every subcarrier (phase machines, fresh top levels);
2. helper flows: each transmitter's symbols that interfered on a helped row,
   sent as MDS combinations on a paired helper level from the next block;
3. originate flows on relay positions;
4. forwarders decode originate generations from their own feedback, and
   forward them from the block after decoding;
5. receivers decode helper and forward generations, then every lane decodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..gf import DEFAULT_PRIME
from ..ld_channel import extract_interference
from ..results import DecodeFailure
from . import flows
from .lanes import LaneSignals, lane_decode, lane_signals, layout_for
from .plan import SchemePlan

DEFAULT_GEN = 32


class Messages:
    """Payload source. Fresh level symbols are drawn per lane as (2, N, q)
    arrays; relay streams draw items on demand and extend as needed."""

    def __init__(self, rng: np.random.Generator, p: int = DEFAULT_PRIME):
        self.rng = rng
        self.p = p
        self.fresh_arrays: dict = {}
        self.item_arrays: dict = {}

    def fresh(self, sub: int, N: int, q: int) -> np.ndarray:
        if sub not in self.fresh_arrays:
            self.fresh_arrays[sub] = self.rng.integers(0, self.p, size=(2, N, q), dtype=np.int64)
        return self.fresh_arrays[sub]

    def items(self, key, count: int) -> np.ndarray:
        have = self.item_arrays.get(key, np.zeros(0, dtype=np.int64))
        if len(have) < count:
            extra = self.rng.integers(0, self.p, size=count - len(have), dtype=np.int64)
            have = np.concatenate([have, extra])
            self.item_arrays[key] = have
        return have[:count]


@dataclass
class FlowRecord:
    kind: str
    sender: int
    sub: int
    level: int  # 0-based tx level
    sched: flows.Schedule
    items: np.ndarray
    key: object = None


@dataclass
class EngineRun:
    plan: SchemePlan
    S: np.ndarray
    lanes: list[LaneSignals]
    delivered: np.ndarray
    breakdown: dict = field(default_factory=dict)
    flows: list[FlowRecord] = field(default_factory=list)
    learned_mismatch: int = 0

    def tx(self, user: int, sub: int) -> np.ndarray:
        return self.lanes[sub].X[user]


def _pipe_rx(lane: LaneSignals, receiver: int, level: int, slots) -> np.ndarray:
    """What a receiver reads on a pipe: its output row fed by the other
    transmitter's ``level`` (cross path is unshifted when k = q)."""
    lay = lane.layout
    row = level + lay.q - lay.k
    return lane.Y[receiver][slots, row]


def _pipe_feedback(lane: LaneSignals, user: int, level: int, slots, p) -> np.ndarray:
    """What transmitter ``user`` learns about the other's ``level`` from its
    own receiver's output, after removing its own contribution."""
    lay = lane.layout
    learned = extract_interference(lay.cfg, lane.Y[user][slots], lane.X[user][slots], p)
    return learned[:, level]


def run_engine(
    plan: SchemePlan,
    S: np.ndarray,
    messages: Messages,
    N_B: int,
    relay_mode: str = "symmetric",
    leader: int = 0,
    G: int = DEFAULT_GEN,
    p: int = DEFAULT_PRIME,
) -> EngineRun:
    """Run one trial on the given state matrix ``S`` (N x M)."""
    S = np.asarray(S, dtype=bool)
    N = S.shape[0]
    if S.shape[1] != len(plan.lanes):
        raise ValueError("state matrix width must equal the number of subcarriers")
    lanes = []
    for lane in plan.lanes:
        lay = layout_for(lane)
        lanes.append(lane_signals(lay, S[:, lane.index], messages.fresh(lane.index, N, lay.q), p))
    records: list[FlowRecord] = []
    every = np.ones(N, dtype=bool)
    block = np.arange(N) // N_B

    # helper flows
    helper_map = []
    for (sub, i), (hsub, hlvl) in plan.pairing:
        src_lane = lanes[sub]
        src = src_lane.layout.sources[i]
        hits = np.nonzero(S[:, sub])[0]
        for u in (0, 1):
            items = src_lane.X[u][hits, src]
            avail = flows.avail_from_ready(flows.block_ready(hits, N_B), N, G)
            sched = flows.schedule(avail, every, S[:, hsub], G)
            lanes[hsub].X[u][sched.tx_slots, hlvl - 1] = flows.encode(items, sched, p)
            rec = FlowRecord("helper", u, hsub, hlvl - 1, sched, items, (sub, i))
            records.append(rec)
            helper_map.append((rec, sub, i, hits))

    # relay flows
    if relay_mode == "symmetric":
        stages = [(u, block % 2 == 0, block % 2 == 1) for u in (0, 1)]
    elif relay_mode == "corner":
        stages = [(leader, every, every)]
    else:
        raise ValueError(f"unknown relay mode {relay_mode!r}")
    originates = []
    for sub, lvl in plan.relay_positions:
        for u, act_o, _ in stages:
            sched = flows.schedule(np.full(N, flows.UNLIMITED), act_o, S[:, sub], G)
            key = ("relay", sub, lvl, u)
            items = messages.items(key, sched.n_gens * G)
            lanes[sub].X[u][sched.tx_slots, lvl - 1] = flows.encode(items, sched, p)
            rec = FlowRecord("originate", u, sub, lvl - 1, sched, items, key)
            records.append(rec)
            originates.append(rec)
    for lane in lanes:
        lane.refresh(p)

    forwards = []
    for rec, (u, _, act_f) in zip(originates, stages * len(plan.relay_positions)):
        fwd = 1 - u
        lane = lanes[rec.sub]
        vals = _pipe_feedback(lane, fwd, rec.level, rec.sched.recv_slots, p)
        got = flows.decode(rec.sched, vals, p)
        idx, est = got.flat()
        if np.any(est != rec.items[idx]):
            bad = int(np.nonzero(est != rec.items[idx])[0][0])
            raise DecodeFailure("forwarder decode mismatch", slot=int(got.done_slots[bad // G]),
                                subcarrier=rec.sub, level=rec.level + 1, user=fwd)
        ready = np.repeat(flows.block_ready(got.done_slots, N_B), G)
        avail = flows.avail_from_ready(ready, N, G)
        sched = flows.schedule(avail, act_f, S[:, rec.sub], G)
        lane.X[fwd][sched.tx_slots, rec.level] = flows.encode(est, sched, p)
        frec = FlowRecord("forward", fwd, rec.sub, rec.level, sched, est, rec.key)
        records.append(frec)
        forwards.append((frec, rec))
    for lane in lanes:
        lane.refresh(p)

    # receivers
    helper_vals: dict = {}
    helper_count = np.zeros(2, dtype=np.int64)
    for rec, sub, i, hits in helper_map:
        rx = 1 - rec.sender
        vals = _pipe_rx(lanes[rec.sub], rx, rec.level, rec.sched.recv_slots)
        got = flows.decode(rec.sched, vals, p)
        idx, est = got.flat()
        helper_vals[(rx, i, sub)] = (hits[idx], est)
        helper_count[rx] += len(idx)
    relay_count = np.zeros(2, dtype=np.int64)
    for frec, orec in forwards:
        rx = 1 - frec.sender
        vals = _pipe_rx(lanes[frec.sub], rx, frec.level, frec.sched.recv_slots)
        got = flows.decode(frec.sched, vals, p)
        idx, est = got.flat()
        bad = np.nonzero(est != orec.items[idx])[0]
        if bad.size:
            raise DecodeFailure("relay decode mismatch", slot=int(got.done_slots[bad[0] // G]),
                                subcarrier=frec.sub, level=frec.level + 1, user=rx)
        relay_count[rx] += len(idx)

    lane_count = np.zeros(2, dtype=np.int64)
    for lane in lanes:
        sub = lane.layout.index
        h = {(u, i): v for (u, i, s), v in helper_vals.items() if s == sub}
        lane_count += lane_decode(lane, h, p)
    total = lane_count + relay_count
    return EngineRun(
        plan, S, lanes, total,
        {"lanes": lane_count.tolist(), "relay": relay_count.tolist(),
         "helper_items": helper_count.tolist()},
        records,
        sum(l.learned_mismatch for l in lanes),
    )


def dump_trace(run: EngineRun, fh, start: int = 0, stop: int | None = None) -> int:
    """Write one JSON object per slot: states, inputs, outputs and phases."""
    import json

    stop = len(run.S) if stop is None else min(stop, len(run.S))
    for t in range(start, stop):
        rec = {
            "t": t,
            "s": [int(b) for b in run.S[t]],
            "tx": [[lane.X[u][t].tolist() for lane in run.lanes] for u in (0, 1)],
            "rx": [[lane.Y[u][t].tolist() for lane in run.lanes] for u in (0, 1)],
            "phase": ["R" if lane.R[t] else "F" for lane in run.lanes],
        }
        fh.write(json.dumps(rec) + "\n")
    return max(stop - start, 0)
