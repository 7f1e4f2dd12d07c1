"""Gaussian-model outer bounds, the GDoF formula and separability verdicts.

These are formula evaluators only; no Gaussian signalling is simulated.
Logs are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .capacity_ld import Halfplane, RateRegion
from .state_process import to_fraction


@dataclass(frozen=True)
class GnSubcarrier:
    gD_mag: float
    gI_mag: float

    def __post_init__(self):
        # complex gains are reduced to magnitudes on entry
        object.__setattr__(self, "gD_mag", abs(complex(self.gD_mag)))
        object.__setattr__(self, "gI_mag", abs(complex(self.gI_mag)))
        if not (math.isfinite(self.gD_mag) and math.isfinite(self.gI_mag)):
            raise ValueError("gains must be finite")


@dataclass(frozen=True)
class GdofProfile:
    betas: tuple
    p: Fraction

    def __post_init__(self):
        betas = tuple(to_fraction(b) for b in self.betas)
        if not betas or any(b < 0 for b in betas):
            raise ValueError("need at least one beta, all nonnegative")
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "p", to_fraction(self.p))


def _gn(cfgs) -> list[GnSubcarrier]:
    out = [c if isinstance(c, GnSubcarrier) else GnSubcarrier(*c) for c in cfgs]
    if not out:
        raise ValueError("need at least one subcarrier")
    return out


def delta_g(cfgs: Sequence) -> float:
    total = 0.0
    for c in _gn(cfgs):
        d2, i2 = c.gD_mag**2, c.gI_mag**2
        total += (
            math.log2(1 + (c.gD_mag + c.gI_mag) ** 2)
            + math.log2(1 + d2 / (1 + i2))
            - 2 * math.log2(1 + d2)
        )
    return total


def gn_region(cfgs: Sequence, p) -> RateRegion:
    """Outer bounds as a region with float right-hand sides."""
    cfgs = _gn(cfgs)
    pf = float(to_fraction(p))
    if not 0 <= pf <= 1:
        raise ValueError("p must lie in [0, 1]")
    base = sum(math.log2(1 + c.gD_mag**2) for c in cfgs)
    per_user = sum(
        (1 - pf) * math.log2(1 + c.gD_mag**2) + pf * math.log2(1 + c.gD_mag**2 + c.gI_mag**2)
        for c in cfgs
    )
    dg = delta_g(cfgs)
    causal = pf * dg + (1 + pf) * base
    total = pf * dg + 2 * base
    hps = [
        Halfplane(1.0, 0.0, per_user, "per-user R1"),
        Halfplane(0.0, 1.0, per_user, "per-user R2"),
        Halfplane(1.0, pf, causal, "causal R1+pR2"),
        Halfplane(pf, 1.0, causal, "causal pR1+R2"),
        Halfplane(1.0, 1.0, total, "sum R1+R2"),
        Halfplane(1.0, 1.0, total, "sum R2+R1"),
        Halfplane(-1.0, 0.0, 0.0, "R1>=0"),
        Halfplane(0.0, -1.0, 0.0, "R2>=0"),
    ]
    return RateRegion(hps, [], "outer-bound-only")


def gn_sym_bound(cfgs: Sequence, p) -> float:
    cfgs = _gn(cfgs)
    pf = float(to_fraction(p))
    base = sum(math.log2(1 + c.gD_mag**2) for c in cfgs)
    dg = delta_g(cfgs)
    return base + min(pf * dg / 2, pf * dg / (1 + pf))


def delta_gdof(betas) -> Fraction:
    total = Fraction(0)
    for b in betas:
        b = to_fraction(b)
        total += max(Fraction(1), b) + max(1 - b, Fraction(0)) - 2
    return total


def gdof(profile: GdofProfile) -> Fraction:
    M = len(profile.betas)
    d = delta_gdof(profile.betas)
    p = profile.p
    return 1 + min(p * d / 2, p * d / (1 + p)) / M


SEPARABLE = "separable"
CROSS = "requires-cross-coding"
DEGENERATE = "degenerate-separable"


def separability(ratios, p) -> str:
    p = to_fraction(p)
    if p in (0, 1):
        return DEGENERATE
    ratios = [to_fraction(r) for r in ratios]
    if all(r <= 2 for r in ratios) or all(r >= 2 for r in ratios):
        return SEPARABLE
    return CROSS
