"""Certified two-sided bounds on measures."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real


@dataclass(frozen=True)
class MeasureInterval:
    """Certified bounds ``lower <= true value <= upper``.

    Parameters
    ----------
    lower, upper : Fraction or float
        Bounds; exact rationals when the computation was exact.
    depth : int
        Truncation level (recursion depth or word length) that produced them.
    """

    lower: Real
    upper: Real
    depth: int = 0

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")

    @property
    def width(self):
        return self.upper - self.lower

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def mid(self) -> float:
        return (float(self.lower) + float(self.upper)) / 2.0

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper

    def to_dict(self) -> dict:
        def enc(v):
            return str(v) if isinstance(v, Fraction) else float(v)

        return {"lower": enc(self.lower), "upper": enc(self.upper), "depth": self.depth,
                "lower_float": float(self.lower), "upper_float": float(self.upper)}
