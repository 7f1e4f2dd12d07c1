"""Joint bursty-interference state process across subcarriers.

A distribution is a pmf over state vectors ``s in {0,1}^M`` whose marginals
``P(s_j = 1)`` all equal the same ``p``. States are keyed by ``M``-character
bitstrings with subcarrier 1 in the most significant (leftmost) position.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

FLOAT_TOL = 1e-12


class MalformedDistribution(ValueError):
    pass


class UndefinedPartition(ValueError):
    pass


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions, ``"num/den"`` strings; floats are promoted exactly
    when they are short binary fractions, else by limit_denominator."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        exact = Fraction(float(value))
        approx = exact.limit_denominator(10**6)
        return approx if abs(float(approx) - float(value)) <= FLOAT_TOL else exact
    raise TypeError(f"cannot interpret {value!r} as a probability")


@dataclass(frozen=True)
class JointStateDistribution:
    M: int
    pmf: Mapping[str, Fraction]
    p: Fraction
    kind: str = "custom"
    _table: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        pmf = {str(k): to_fraction(v) for k, v in self.pmf.items()}
        object.__setattr__(self, "pmf", pmf)
        object.__setattr__(self, "p", to_fraction(self.p))
        states = sorted(s for s, w in pmf.items() if w > 0)
        object.__setattr__(self, "_table", tuple(states))

    @property
    def support(self) -> tuple[str, ...]:
        return self._table

    def marginal(self, j: int) -> Fraction:
        """P(S_j = 1) for 0-based subcarrier index ``j``."""
        return sum((w for s, w in self.pmf.items() if s[j] == "1"), Fraction(0))

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "p": str(self.p),
            "kind": self.kind,
            "pmf": {s: str(w) for s, w in sorted(self.pmf.items())},
        }


@dataclass
class ValidationReport:
    ok: bool
    mass: Fraction
    bad_marginals: dict[int, Fraction]
    messages: list[str]

    def __bool__(self) -> bool:
        return self.ok


def validate(dist: JointStateDistribution) -> ValidationReport:
    if not dist.pmf:
        raise MalformedDistribution("empty pmf")
    if dist.M < 1:
        raise MalformedDistribution("M must be >= 1")
    messages: list[str] = []
    for s, w in dist.pmf.items():
        if len(s) != dist.M or set(s) - {"0", "1"}:
            raise MalformedDistribution(f"state key {s!r} is not an {dist.M}-bit string")
        if not 0 <= w <= 1:
            messages.append(f"probability of {s} is {w}, outside [0, 1]")
    mass = sum(dist.pmf.values(), Fraction(0))
    if mass != 1:
        messages.append(f"total mass {mass} (deficit {1 - mass})")
    bad = {}
    for j in range(dist.M):
        m = dist.marginal(j)
        if m != dist.p:
            bad[j + 1] = m
            messages.append(f"subcarrier {j + 1}: marginal {m} != p = {dist.p}")
    return ValidationReport(not messages, mass, bad, messages)


def from_pmf(pmf: Mapping[str, object], p=None, kind: str = "custom") -> JointStateDistribution:
    if not pmf:
        raise MalformedDistribution("empty pmf")
    pmf = {k: to_fraction(v) for k, v in pmf.items()}
    M = len(next(iter(pmf)))
    if p is None:
        p = sum((w for s, w in pmf.items() if s[0] == "1"), Fraction(0))
    return JointStateDistribution(M, pmf, to_fraction(p), kind)


def make_iid(M: int, p) -> JointStateDistribution:
    p = to_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    pmf = {}
    for bits in itertools.product("01", repeat=M):
        ones = bits.count("1")
        w = p**ones * (1 - p) ** (M - ones)
        if w:
            pmf["".join(bits)] = w
    return JointStateDistribution(M, pmf, p, "iid")


def make_identical(M: int, p) -> JointStateDistribution:
    p = to_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    pmf = {}
    if p < 1:
        pmf["0" * M] = 1 - p
    if p > 0:
        pmf["1" * M] = p
    return JointStateDistribution(M, pmf, p, "identical")


def _state_arrays(dist: JointStateDistribution) -> tuple[np.ndarray, np.ndarray]:
    states = dist.support
    bits = np.array([[c == "1" for c in s] for s in states], dtype=bool)
    probs = np.array([float(dist.pmf[s]) for s in states])
    return bits, probs / probs.sum()


def sample_many(dist: JointStateDistribution, rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` i.i.d. state vectors as a bool array of shape (n, M)."""
    bits, probs = _state_arrays(dist)
    if len(bits) == 1:
        return np.repeat(bits, n, axis=0)
    idx = rng.choice(len(bits), size=n, p=probs)
    return bits[idx]


def sample(dist: JointStateDistribution, rng: np.random.Generator) -> tuple[int, ...]:
    return tuple(int(b) for b in sample_many(dist, rng, 1)[0])


@dataclass
class FractionalPartition:
    weights: dict[frozenset, Fraction]
    column_sums: dict[int, Fraction]

    @property
    def ok(self) -> bool:
        return all(v == 1 for v in self.column_sums.values())

    def failing(self) -> list[int]:
        return [j for j, v in self.column_sums.items() if v != 1]


def fractional_partition(dist: JointStateDistribution) -> FractionalPartition:
    """Weights ``P(S = s_E) / p`` over nonempty subsets E with positive mass.

    Subcarriers are 1-based in the returned subsets. ``column_sums[j]`` is the
    total weight of subsets containing ``j``; all equal 1 exactly when every
    marginal equals ``p``.
    """
    if dist.p == 0:
        raise UndefinedPartition("fractional partition needs p > 0")
    weights: dict[frozenset, Fraction] = {}
    for s, w in dist.pmf.items():
        if w == 0:
            continue
        subset = frozenset(j + 1 for j, c in enumerate(s) if c == "1")
        if subset:
            weights[subset] = w / dist.p
    sums = {
        j: sum((g for e, g in weights.items() if j in e), Fraction(0))
        for j in range(1, dist.M + 1)
    }
    return FractionalPartition(weights, sums)


def load_json(obj: Mapping) -> JointStateDistribution:
    """Accepts the explicit form ``{"M", "p", "pmf"}`` or the shorthand
    ``{"kind": "iid" | "identical", "M", "p"}``."""
    kind = obj.get("kind", "custom")
    if kind in ("iid", "identical") and "pmf" not in obj:
        maker = make_iid if kind == "iid" else make_identical
        return maker(int(obj["M"]), to_fraction(obj["p"]))
    if "pmf" not in obj:
        raise MalformedDistribution("distribution needs a pmf or a kind shorthand")
    dist = from_pmf(obj["pmf"], obj.get("p"), kind)
    if "M" in obj and int(obj["M"]) != dist.M:
        raise MalformedDistribution("M does not match pmf key length")
    return dist
