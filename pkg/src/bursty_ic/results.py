"""Result containers shared by the schemes and the harness."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class DecodeFailure(RuntimeError):
    """A decoder produced a symbol that differs from what was sent."""

    def __init__(self, msg: str, slot=None, subcarrier=None, level=None, user=None):
        super().__init__(msg)
        self.slot = slot
        self.subcarrier = subcarrier
        self.level = level
        self.user = user

    def trace(self) -> dict:
        return {
            "error": str(self),
            "slot": self.slot,
            "subcarrier": self.subcarrier,
            "level": self.level,
            "user": self.user,
        }


@dataclass
class SimResult:
    scheme: str
    delivered: tuple[int, int]
    slots: int
    failures: int = 0
    seed: object = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if min(self.delivered) < 0 or self.slots < 0:
            raise ValueError("counts must be nonnegative")

    @property
    def rates(self) -> tuple[float, float]:
        if self.slots == 0:
            return (0.0, 0.0)
        return (self.delivered[0] / self.slots, self.delivered[1] / self.slots)

    @property
    def exact_rates(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self.delivered[0], self.slots), Fraction(self.delivered[1], self.slots))

    def merge(self, other: "SimResult") -> "SimResult":
        """Pool two runs of the same scheme (associative, order-free)."""
        return SimResult(
            self.scheme,
            (self.delivered[0] + other.delivered[0], self.delivered[1] + other.delivered[1]),
            self.slots + other.slots,
            self.failures + other.failures,
            None,
        )

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme,
            "delivered": list(self.delivered),
            "slots": self.slots,
            "rates": list(self.rates),
            "failures": self.failures,
            "seed": self.seed,
        }
