"""Symmetric linear deterministic interference channel with a bursty cross link.

Level vectors are indexed top-down: position 0 is the most significant level.
All signal functions accept arrays whose *last* axis holds the ``q`` levels, so
the same code runs on a single vector, a whole (slots, q) trace, or a
(variables, q) coefficient matrix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gf import DEFAULT_PRIME, check_prime
from .state_process import JointStateDistribution, sample_many


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SubcarrierConfig:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 0 or self.k < 0:
            raise ConfigError("link strengths must be nonnegative")

    @property
    def q(self) -> int:
        return max(self.n, self.k)

    @property
    def alpha(self) -> Fraction | None:
        return None if self.n == 0 else Fraction(self.k, self.n)

    def regime(self) -> str:
        """One of ``weak`` (alpha <= 1), ``strong`` (1 < alpha < 2), ``two``
        (alpha = 2) or ``very_strong`` (alpha > 2)."""
        if self.k <= self.n:
            return "weak"
        if self.k < 2 * self.n:
            return "strong"
        if self.k == 2 * self.n:
            return "two"
        return "very_strong"


def make_configs(pairs) -> list[SubcarrierConfig]:
    cfgs = [c if isinstance(c, SubcarrierConfig) else SubcarrierConfig(*c) for c in pairs]
    if not cfgs:
        raise ConfigError("need at least one subcarrier")
    for c in cfgs:
        if c.n == 0:
            raise ConfigError("n = 0 subcarriers do not take part in rate accounting")
    return cfgs


def shift_apply(q: int, d: int, x, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Down-shift by ``d`` levels: output level i is input level i - d."""
    if not 0 <= d <= q:
        raise ValueError(f"shift {d} outside [0, {q}]")
    x = np.asarray(x, dtype=np.int64)
    if x.shape[-1] != q:
        raise ValueError(f"level vector has {x.shape[-1]} entries, expected {q}")
    out = np.zeros_like(x)
    if d < q:
        out[..., d:] = x[..., : q - d]
    return out


def transfer(cfg: SubcarrierConfig, x_own, x_other, s, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Received levels: direct path shifted by q - n plus, when ``s`` is set,
    the cross path shifted by q - k. ``s`` broadcasts against the leading axes."""
    q = cfg.q
    direct = shift_apply(q, q - cfg.n, x_own, p)
    cross = shift_apply(q, q - cfg.k, x_other, p)
    s = np.asarray(s, dtype=np.int64)
    if s.ndim:
        s = s[..., None]
    return (direct + s * cross) % p


def extract_interference(cfg: SubcarrierConfig, y, x_own, p: int = DEFAULT_PRIME) -> np.ndarray:
    """What a transmitter learns from fed-back output of an interfered slot:
    the top ``k`` levels of the other user's input (remaining entries zero)."""
    q = cfg.q
    residual = (np.asarray(y, dtype=np.int64) - shift_apply(q, q - cfg.n, x_own, p)) % p
    learned = np.zeros_like(residual)
    learned[..., : cfg.k] = residual[..., q - cfg.k:]
    return learned


@dataclass(frozen=True)
class FeedbackRecord:
    t: int
    received: tuple[tuple[int, ...], ...]
    state: tuple[int, ...]


@dataclass
class ChannelSession:
    """Slot-by-slot channel with unit-delay feedback to each transmitter.

    One state vector is drawn per slot and gates the cross links of both
    receivers. Feedback for slot t becomes readable only after ``step`` for
    slot t + 1 has been entered.
    """

    cfgs: list[SubcarrierConfig]
    dist: JointStateDistribution
    rng: np.random.Generator
    p: int = DEFAULT_PRIME
    t: int = 0
    _queues: tuple = field(default_factory=lambda: (deque(), deque()))
    _delivered: tuple = field(default_factory=lambda: ([], []))

    def __post_init__(self):
        check_prime(self.p)
        if self.dist.M != len(self.cfgs):
            raise ConfigError("distribution M does not match number of subcarriers")

    def feedback(self, user: int) -> list[FeedbackRecord]:
        """Records visible to transmitter ``user`` (0 or 1) right now."""
        return list(self._delivered[user])

    def step(self, tx1, tx2):
        for u in (0, 1):
            while self._queues[u]:
                self._delivered[u].append(self._queues[u].popleft())
        if len(tx1) != len(self.cfgs) or len(tx2) != len(self.cfgs):
            raise ValueError("need one level vector per subcarrier for each user")
        s = sample_many(self.dist, self.rng, 1)[0].astype(int)
        y1, y2 = [], []
        for j, cfg in enumerate(self.cfgs):
            x1 = np.asarray(tx1[j], dtype=np.int64) % self.p
            x2 = np.asarray(tx2[j], dtype=np.int64) % self.p
            y1.append(transfer(cfg, x1, x2, s[j], self.p))
            y2.append(transfer(cfg, x2, x1, s[j], self.p))
        state = tuple(int(b) for b in s)
        for u, ys in ((0, y1), (1, y2)):
            self._queues[u].append(
                FeedbackRecord(self.t, tuple(tuple(int(v) for v in y) for y in ys), state)
            )
        self.t += 1
        return y1, y2, state


def step_system(cfgs, dist, tx1_inputs, tx2_inputs, rng, p: int = DEFAULT_PRIME):
    """One synchronous slot over all subcarriers (stateless convenience form).

    Returns ``(y1, y2, s, records)`` where ``records`` are the feedback records
    for each user, to be delivered before the next slot's inputs are chosen.
    """
    session = ChannelSession(list(cfgs), dist, rng, p)
    y1, y2, s = session.step(tx1_inputs, tx2_inputs)
    records = tuple(session._queues[u][0] for u in (0, 1))
    return y1, y2, s, records
