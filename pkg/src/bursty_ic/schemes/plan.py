"""Level allocation for the multicarrier schemes.

Levels in a plan are 1-based and top-down, matching how the figures are read.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..ld_channel import SubcarrierConfig, make_configs


def _span(lo: int, hi: int) -> tuple[int, ...]:
    """Inclusive 1-based range; empty when hi < lo."""
    return tuple(range(lo, hi + 1))


@dataclass(frozen=True)
class LanePlan:
    index: int
    n: int
    k: int
    h: int = 0

    @property
    def cfg(self) -> SubcarrierConfig:
        return SubcarrierConfig(self.n, self.k)

    @property
    def q(self) -> int:
        return max(self.n, self.k)

    @property
    def regime(self) -> str:
        return self.cfg.regime()

    @property
    def cap(self) -> int:
        """Most levels that can be helped on this subcarrier."""
        r = self.regime
        if r == "weak":
            return self.k
        if r == "strong":
            return 2 * self.n - self.k
        return 0

    @property
    def n_eff(self) -> int:
        return self.n - self.h

    @property
    def k_eff(self) -> int:
        return self.k - self.h

    @property
    def phase_active(self) -> bool:
        r = self.regime
        if r == "weak":
            return self.k_eff > 0
        if r in ("strong", "two"):
            return 2 * self.n - self.k - self.h > 0
        return False

    @property
    def fresh_levels(self) -> tuple[int, ...]:
        return _span(1, self.n)

    @property
    def helper_levels(self) -> tuple[int, ...]:
        if self.regime == "very_strong":
            return _span(self.n + 1, self.k - self.n)
        return ()

    @property
    def unused_levels(self) -> tuple[int, ...]:
        if self.regime == "very_strong":
            return _span(self.k - self.n + 1, self.k)
        if self.regime in ("strong", "two"):
            return _span(self.n + 1, self.k)
        return ()

    @property
    def helped_tx_levels(self) -> tuple[int, ...]:
        if self.regime == "weak":
            return _span(self.n - self.h + 1, self.n)
        return _span(1, self.h)

    @property
    def helped_rx_levels(self) -> tuple[int, ...]:
        if self.regime == "weak":
            return _span(self.n - self.h + 1, self.n)
        return _span(self.k - self.n + 1, self.k - self.n + self.h)

    @property
    def source_levels(self) -> tuple[int, ...]:
        """Levels of the other transmitter that land on the helped rows."""
        if self.regime == "weak":
            return _span(self.k - self.h + 1, self.k)
        return _span(self.k - self.n + 1, self.k - self.n + self.h)


@dataclass
class SchemePlan:
    lanes: list[LanePlan]
    delta: int
    delta_left: int
    # (subcarrier, pair index) -> (subcarrier, helper level); 0-based subcarriers
    pairing: list[tuple[tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    relay_positions: list[tuple[int, int]] = field(default_factory=list)

    @property
    def helped_total(self) -> int:
        return sum(l.h for l in self.lanes)

    @property
    def helper_total(self) -> int:
        return sum(len(l.helper_levels) for l in self.lanes)

    def check(self) -> None:
        """Raise AssertionError if a plan invariant is broken."""
        for lane in self.lanes:
            assert 0 <= lane.h <= lane.cap, lane
            sets = [
                set(lane.fresh_levels),
                set(lane.helper_levels),
                set(lane.unused_levels),
            ]
            assert sum(map(len, sets)) == len(set().union(*sets))
            assert set().union(*sets) <= set(range(1, lane.q + 1))
        if self.delta >= 0:
            assert all(l.h == l.cap for l in self.lanes)
            assert self.delta_left == self.delta
        else:
            assert self.helped_total == self.helper_total
            assert self.delta_left == 0
        assert len(self.pairing) == self.helped_total
        assert len(self.relay_positions) == self.delta_left


def plan_levels(cfgs) -> SchemePlan:
    """Help as much as possible: fill each subcarrier's cap in index order
    until the helper budget runs out; leftover helper levels become relays."""
    cfgs = make_configs(cfgs)
    budget = sum(max(c.k - 2 * c.n, 0) for c in cfgs)
    lanes = []
    remaining = budget
    for j, c in enumerate(cfgs):
        lane = LanePlan(j, c.n, c.k)
        h = min(lane.cap, remaining)
        remaining -= h
        lanes.append(LanePlan(j, c.n, c.k, h))
    positions = [(l.index, lvl) for l in lanes for lvl in l.helper_levels]
    pairs = [(l.index, i) for l in lanes for i in range(l.h)]
    pairing = list(zip(pairs, positions))
    relay = positions[len(pairs):]
    delta = sum(c.q + max(c.n - c.k, 0) - 2 * c.n for c in cfgs)
    plan = SchemePlan(lanes, delta, len(relay), pairing, relay)
    plan.check()
    return plan
