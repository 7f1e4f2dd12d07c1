"""Separation scheme for the Q1 / Q2 corners.

Each subcarrier is run on its own. With ``L`` the leader and ``F`` the
follower:

* alpha <= 1: L sends n fresh symbols every slot. F sends fresh symbols on
  its bottom n - k levels and, one slot later, repeats on its top levels the
  L symbols that collided with them (learned from feedback), which lets Rx_F
  cancel the interference and Rx_L cancel its own past symbols.
* alpha > 1: L sends n fresh symbols on top and relays k - n more streams
  through F: originate on levels n+1..k, forward on F's levels 1..k-n.
"""

from __future__ import annotations

import numpy as np

from ..gf import DEFAULT_PRIME
from ..ld_channel import SubcarrierConfig, extract_interference, transfer
from ..results import DecodeFailure
from . import flows
from .engine import DEFAULT_GEN, Messages


def _check(got, want, slots, sub, level, user, what):
    bad = np.nonzero(got != want)[0]
    if bad.size:
        raise DecodeFailure(what, slot=int(slots[bad[0]]), subcarrier=sub, level=level, user=user)


def _weak(cfg, sub, S, fresh, L, p):
    n, k = cfg.n, cfg.k
    Fo = 1 - L
    N = len(S)
    X = np.zeros((2, N, n), dtype=np.int64)
    X[L] = fresh[L][:, :n]
    X[Fo][:, k:n] = fresh[Fo][:, k:n]
    c = min(n - k, k)
    src = list(range(max(2 * k - n, 0), k))
    if c:
        # feedback of slot t is read before slot t+1 is formed
        y_fb = transfer(cfg, X[Fo], X[L], S, p)
        learned = extract_interference(cfg, y_fb, X[Fo], p)
        fwd = np.where(S[:, None], learned[:, src], 0)
        X[Fo][1:, :c] = fwd[:-1]
    Y = [transfer(cfg, X[u], X[1 - u], S, p) for u in (0, 1)]
    counts = np.zeros(2, dtype=np.int64)

    # leader: rows below n-k carry F's top levels; those above c are empty
    est = Y[L].copy()
    off = n - k
    for r in range(off, n):
        lvl = r - off
        if lvl < c:
            prev = np.zeros(N, dtype=np.int64)
            # the forwarded value is the leader's own symbol from slot t-1,
            # already decoded when slot t is processed
            prev[1:] = np.where(S[:-1], X[L][:-1, src[lvl]], 0)
            est[:, r] = (Y[L][:, r] - S * prev) % p
    _check(est.ravel(), X[L].ravel(), np.repeat(np.arange(N), n), sub, None, L, "leader mismatch")
    counts[L] += est.size

    # follower: fresh on rows k..n-1, interfered by L's level r-(n-k)
    for r in range(k, n):
        y = Y[Fo][:, r]
        if r < off:
            _check(y, X[Fo][:, r], np.arange(N), sub, r + 1, Fo, "follower mismatch")
            counts[Fo] += N
            continue
        j = src.index(r - off)
        clean = np.nonzero(~S)[0]
        hit = np.nonzero(S[:-1])[0]
        got = np.concatenate([y[clean], (y[hit] - Y[Fo][hit + 1, j]) % p])
        want = np.concatenate([X[Fo][clean, r], X[Fo][hit, r]])
        _check(got, want, np.concatenate([clean, hit]), sub, r + 1, Fo, "follower mismatch")
        counts[Fo] += got.size
    return counts, X


def _strong(cfg, sub, S, fresh, L, messages, N_B, G, p):
    n, k = cfg.n, cfg.k
    Fo = 1 - L
    N = len(S)
    X = np.zeros((2, N, k), dtype=np.int64)
    X[L][:, :n] = fresh[L][:, :n]
    every = np.ones(N, dtype=bool)
    relays = []
    for i in range(k - n):
        sched = flows.schedule(np.full(N, flows.UNLIMITED), every, S, G)
        key = ("q", sub, i)
        items = messages.items(key, sched.n_gens * G)
        X[L][sched.tx_slots, n + i] = flows.encode(items, sched, p)
        relays.append((i, sched, items))
    Y_f = transfer(cfg, X[Fo], X[L], S, p)
    learned = extract_interference(cfg, Y_f, X[Fo], p)
    fwd_plans = []
    for i, sched, items in relays:
        got = flows.decode(sched, learned[sched.recv_slots, n + i], p)
        idx, est = got.flat()
        _check(est, items[idx], np.repeat(got.done_slots, G), sub, n + i + 1, Fo,
               "forwarder mismatch")
        ready = np.repeat(flows.block_ready(got.done_slots, N_B), G)
        fs = flows.schedule(flows.avail_from_ready(ready, N, G), every, S, G)
        X[Fo][fs.tx_slots, i] = flows.encode(est, fs, p)
        fwd_plans.append((i, fs, items))
    Y = [transfer(cfg, X[u], X[1 - u], S, p) for u in (0, 1)]
    counts = np.zeros(2, dtype=np.int64)
    top = Y[L][:, k - n:]
    _check(top.ravel(), X[L][:, :n].ravel(), np.repeat(np.arange(N), n), sub, None, L,
           "leader mismatch")
    counts[L] += top.size
    for i, fs, items in fwd_plans:
        got = flows.decode(fs, Y[L][fs.recv_slots, i], p)
        idx, est = got.flat()
        _check(est, items[idx], np.repeat(got.done_slots, G), sub, i + 1, L, "relay mismatch")
        counts[L] += len(idx)
    return counts, X


def run_separation(cfgs, S, messages: Messages, leader: int, N_B: int,
                   G: int = DEFAULT_GEN, p: int = DEFAULT_PRIME):
    """Per-user delivered counts and transmit arrays for each subcarrier."""
    S = np.asarray(S, dtype=bool)
    N = S.shape[0]
    total = np.zeros(2, dtype=np.int64)
    txs = []
    for j, cfg in enumerate(cfgs):
        cfg = cfg if isinstance(cfg, SubcarrierConfig) else SubcarrierConfig(*cfg)
        fresh = messages.fresh(j, N, cfg.q)
        if cfg.k <= cfg.n:
            c, X = _weak(cfg, j, S[:, j], fresh, leader, p)
        else:
            c, X = _strong(cfg, j, S[:, j], fresh, leader, messages, N_B, G, p)
        total += c
        txs.append(X)
    return total, txs
