"""Closed intervals and boxes with exact rational endpoints."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction, str]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to Fraction.

    Floats are refused: every quantity in this package is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Serialize as ``"p/q"`` in lowest terms (q is always written)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        x = as_fraction(x)
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def issubset(self, other: "RationalInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def disjoint(self, other: "RationalInterval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def intersect(self, other: "RationalInterval") -> "RationalInterval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return RationalInterval(lo, hi) if lo <= hi else None

    def bisect(self) -> tuple["RationalInterval", "RationalInterval"]:
        mid = self.midpoint
        return RationalInterval(self.lo, mid), RationalInterval(mid, self.hi)

    def to_json(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    @classmethod
    def from_json(cls, obj) -> "RationalInterval":
        if isinstance(obj, dict):
            return cls(as_fraction(obj["lo"]), as_fraction(obj["hi"]))
        lo, hi = obj
        return cls(as_fraction(lo), as_fraction(hi))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def hull(intervals: Iterable[RationalInterval]) -> RationalInterval:
    intervals = list(intervals)
    return RationalInterval(min(i.lo for i in intervals), max(i.hi for i in intervals))


@dataclass(frozen=True)
class Box:
    """Product of closed rational intervals, one factor per variable."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(
            f if isinstance(f, RationalInterval) else RationalInterval(*f)
            for f in self.factors
        )
        if not factors:
            raise ValueError("a box needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def of(cls, *factors) -> "Box":
        return cls(tuple(factors))

    def __len__(self) -> int:
        return len(self.factors)

    def __getitem__(self, i) -> RationalInterval:
        return self.factors[i]

    def __iter__(self):
        return iter(self.factors)

    @property
    def arity(self) -> int:
        return len(self.factors)

    @property
    def volume(self) -> Fraction:
        v = Fraction(1)
        for f in self.factors:
            v *= f.width
        return v

    def contains_point(self, point: Sequence) -> bool:
        return len(point) == self.arity and all(x in f for x, f in zip(point, self.factors))

    def issubset(self, other: "Box") -> bool:
        return self.arity == other.arity and all(
            a.issubset(b) for a, b in zip(self.factors, other.factors)
        )

    def replace(self, index: int, factor: RationalInterval) -> "Box":
        factors = list(self.factors)
        factors[index] = factor
        return Box(tuple(factors))

    def corners(self):
        pts = [()]
        for f in self.factors:
            pts = [p + (x,) for p in pts for x in (f.lo, f.hi)]
        return pts

    def midpoint(self) -> tuple:
        return tuple(f.midpoint for f in self.factors)

    def to_json(self) -> list:
        return [[format_rational(f.lo), format_rational(f.hi)] for f in self.factors]

    @classmethod
    def from_json(cls, obj) -> "Box":
        return cls(tuple(RationalInterval.from_json(f) for f in obj))
