"""Exact capacity region of the bursty linear deterministic model with feedback."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ld_channel import SubcarrierConfig, make_configs
from .state_process import to_fraction


@dataclass(frozen=True)
class Halfplane:
    """``a1 * R1 + a2 * R2 <= b``."""

    a1: object
    a2: object
    b: object
    label: str
    active: bool = True

    def slack(self, r1, r2):
        return self.b - (self.a1 * r1 + self.a2 * r2)


@dataclass(frozen=True)
class Corner:
    label: str
    r1: object
    r2: object
    applicable: bool = True


@dataclass
class RateRegion:
    halfplanes: list[Halfplane]
    corners: list[Corner] = field(default_factory=list)
    kind: str = "capacity"

    def contains(self, r1, r2) -> tuple[bool, dict[str, object]]:
        return contains(self, r1, r2)

    def to_json(self) -> dict:
        def num(v):
            return str(v) if isinstance(v, Fraction) else v

        return {
            "kind": self.kind,
            "halfplanes": [
                {"a1": num(h.a1), "a2": num(h.a2), "b": num(h.b), "label": h.label,
                 "active": h.active}
                for h in self.halfplanes
            ],
            "corners": [
                {"label": c.label, "r1": num(c.r1), "r2": num(c.r2), "applicable": c.applicable}
                for c in self.corners
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RateRegion":
        def parse(v):
            return to_fraction(v) if isinstance(v, str) else v

        hps = [
            Halfplane(parse(h["a1"]), parse(h["a2"]), parse(h["b"]), h["label"],
                      h.get("active", True))
            for h in obj["halfplanes"]
        ]
        corners = [
            Corner(c["label"], parse(c["r1"]), parse(c["r2"]), c.get("applicable", True))
            for c in obj.get("corners", [])
        ]
        return cls(hps, corners, obj.get("kind", "capacity"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["type", "label", "a1", "a2", "b", "r1", "r2", "active"])
        for h in self.halfplanes:
            w.writerow(["halfplane", h.label, h.a1, h.a2, h.b, "", "", h.active])
        for c in self.corners:
            w.writerow(["corner", c.label, "", "", "", c.r1, c.r2, c.applicable])
        return buf.getvalue()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _pos(x):
    return x if x > 0 else 0


def delta(cfgs: Sequence) -> int:
    cfgs = make_configs(cfgs)
    return sum(c.q + _pos(c.n - c.k) - 2 * c.n for c in cfgs)


def _terms(cfgs, p):
    cfgs = make_configs(cfgs)
    p = to_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    d = delta(cfgs)
    sum_n = sum(c.n for c in cfgs)
    per_user = p * d + sum(c.n * (1 + p) - _pos(c.n - c.k) * p for c in cfgs)
    causal = p * d + sum_n * (1 + p)
    total = p * d + 2 * sum_n
    return cfgs, p, d, sum_n, per_user, causal, total


def region(cfgs: Sequence, p) -> RateRegion:
    cfgs, p, d, _, per_user, causal, total = _terms(cfgs, p)
    one = Fraction(1)
    zero = Fraction(0)
    hps = [
        Halfplane(one, zero, per_user, "per-user R1"),
        Halfplane(zero, one, per_user, "per-user R2"),
        Halfplane(one, p, causal, "causal R1+pR2"),
        Halfplane(p, one, causal, "causal pR1+R2"),
        Halfplane(one, one, total, "sum R1+R2", active=d > 0),
        Halfplane(one, one, total, "sum R2+R1", active=d > 0),
        Halfplane(-one, zero, zero, "R1>=0"),
        Halfplane(zero, -one, zero, "R2>=0"),
    ]
    return RateRegion(hps, corner_points(cfgs, p))


def corner_points(cfgs: Sequence, p) -> list[Corner]:
    cfgs, p, d, sum_n, per_user, _, _ = _terms(cfgs, p)
    weak_part = sum(_pos(c.n - c.k) for c in cfgs)
    r_c = Fraction(p, 1 + p) * d + sum_n
    r_nc = p / 2 * d + sum_n
    return [
        Corner("P1", per_user, Fraction(0)),
        Corner("Q1", per_user, Fraction(weak_part)),
        Corner("D1", p * d + sum_n, Fraction(sum_n), d >= 0),
        Corner("R_C", r_c, r_c, d <= 0),
        Corner("R_NC", r_nc, r_nc, d >= 0),
        Corner("D2", Fraction(sum_n), p * d + sum_n, d >= 0),
        Corner("Q2", Fraction(weak_part), per_user),
        Corner("P2", Fraction(0), per_user),
    ]


def sym_capacity(cfgs: Sequence, p) -> Fraction:
    _, p, d, sum_n, *_ = _terms(cfgs, p)
    return sum_n + min(p * d / 2, p * d / (1 + p))


def contains(reg: RateRegion, r1, r2) -> tuple[bool, dict[str, object]]:
    """Membership plus per-halfplane slack (negative slack = violated)."""
    slacks = {h.label: h.slack(r1, r2) for h in reg.halfplanes}
    return all(v >= 0 for v in slacks.values()), slacks


def redundant_halfplanes(reg: RateRegion) -> list[str]:
    """Labels of halfplanes implied by the others, found by checking whether
    any vertex of the region without it violates it."""
    from itertools import combinations

    out = []
    for h in reg.halfplanes:
        rest = [g for g in reg.halfplanes if g is not h]
        violated = False
        for g1, g2 in combinations(rest, 2):
            det = g1.a1 * g2.a2 - g1.a2 * g2.a1
            if det == 0:
                continue
            r1 = (g1.b * g2.a2 - g1.a2 * g2.b) / det
            r2 = (g1.a1 * g2.b - g1.b * g2.a1) / det
            if all(g.slack(r1, r2) >= 0 for g in rest) and h.slack(r1, r2) < 0:
                violated = True
                break
        if not violated:
            out.append(h.label)
    return out


def configs_from(pairs) -> list[SubcarrierConfig]:
    return make_configs(pairs)
