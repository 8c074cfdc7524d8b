"""Increasing piecewise-linear bijections carrying one interval tree onto another.

At finite depth a tree of ``2**K`` disjoint closed intervals leaves
``2**K - 1`` open gaps between consecutive intervals.  Two such gap lists of
equal length are order-isomorphic in exactly one way (i-th gap to i-th gap),
and mapping bounds to bounds, gaps affinely onto gaps, and the closed pieces
in between affinely onto their counterparts gives an increasing bijection of
the line with unit slope outside the bounds.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .interval import RationalInterval, as_fraction, format_rational


@dataclass(frozen=True)
class GapFamily:
    bounds: tuple  # (a, b) with a < b
    gaps: tuple  # open intervals (lo, hi), ordered by sup U <= inf V

    def __post_init__(self):
        a, b = (as_fraction(v) for v in self.bounds)
        if not a < b:
            raise ValueError("bounds must satisfy a < b")
        gaps = tuple((as_fraction(lo), as_fraction(hi)) for lo, hi in self.gaps)
        prev = a
        for lo, hi in gaps:
            if not (prev <= lo < hi <= b):
                raise ValueError(f"gap ({lo}, {hi}) out of order or outside [{a}, {b}]")
            prev = hi
        object.__setattr__(self, "bounds", (a, b))
        object.__setattr__(self, "gaps", gaps)

    def __len__(self) -> int:
        return len(self.gaps)


def gaps_of_intervals(intervals) -> GapFamily:
    ivs = sorted(intervals)
    gaps = tuple((ivs[i].hi, ivs[i + 1].lo) for i in range(len(ivs) - 1))
    return GapFamily((ivs[0].lo, ivs[-1].hi), gaps)


def gaps_of(approx) -> GapFamily:
    """Gaps between consecutive deepest-level intervals of a tree."""
    if approx.depth < 1:
        raise ValueError("tree has no levels")
    return gaps_of_intervals(approx.deepest())


def order_isomorphism(g0: GapFamily, g1: GapFamily) -> list:
    """The unique order isomorphism between two finite chains of gaps."""
    if len(g0) != len(g1):
        raise ValueError(f"gap families differ in size ({len(g0)} vs {len(g1)})")
    return [(i, i) for i in range(len(g0))]


@dataclass(frozen=True)
class PiecewiseLinearMap:
    """Increasing PL map; slope 1 beyond the first and last breakpoints."""

    breakpoints: tuple  # ((x, y), ...)

    def __post_init__(self):
        pts = tuple((as_fraction(x), as_fraction(y)) for x, y in self.breakpoints)
        if not pts:
            raise ValueError("need at least one breakpoint")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x0 < x1 and y0 < y1):
                raise ValueError("breakpoints must increase strictly in both coordinates")
        object.__setattr__(self, "breakpoints", pts)

    @staticmethod
    def _apply(pts, t):
        xs = [p[0] for p in pts]
        if t <= xs[0]:
            return pts[0][1] + (t - xs[0])
        if t >= xs[-1]:
            return pts[-1][1] + (t - xs[-1])
        i = bisect_right(xs, t) - 1
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        return y0 + (y1 - y0) * (t - x0) / (x1 - x0)

    def __call__(self, t) -> Fraction:
        return self._apply(self.breakpoints, as_fraction(t))

    def inverse(self, s) -> Fraction:
        return self._apply(tuple((y, x) for x, y in self.breakpoints), as_fraction(s))

    def inverted(self) -> "PiecewiseLinearMap":
        return PiecewiseLinearMap(tuple((y, x) for x, y in self.breakpoints))

    def image(self, iv: RationalInterval) -> RationalInterval:
        return RationalInterval(self(iv.lo), self(iv.hi))

    def to_json(self) -> dict:
        return {"breakpoints": [[format_rational(x), format_rational(y)] for x, y in self.breakpoints]}

    @classmethod
    def from_json(cls, obj) -> "PiecewiseLinearMap":
        return cls(tuple((x, y) for x, y in obj["breakpoints"]))


def increasing_bijection(pairing, g0: GapFamily, g1: GapFamily) -> PiecewiseLinearMap:
    if sorted(pairing) != [(i, i) for i in range(len(g0))] or len(g0) != len(g1):
        raise ValueError("pairing is not the order isomorphism of the two gap families")
    pts = [(g0.bounds[0], g1.bounds[0])]
    for i, k in pairing:
        (u, v), (r, s) = g0.gaps[i], g1.gaps[k]
        pts.append((u, r))
        pts.append((v, s))
    pts.append((g0.bounds[1], g1.bounds[1]))
    # a gap may touch a bound or its neighbour only when both sides do so
    merged = []
    for x, y in pts:
        if merged and merged[-1][0] == x:
            if merged[-1][1] != y:
                raise ValueError("gap layouts are incompatible (touching endpoints differ)")
            continue
        merged.append((x, y))
    return PiecewiseLinearMap(tuple(merged))


def tree_homeomorphism(source, target) -> PiecewiseLinearMap:
    g0, g1 = gaps_of(source), gaps_of(target)
    return increasing_bijection(order_isomorphism(g0, g1), g0, g1)


def is_increasing_algebraic(f, samples) -> bool:
    """Check ``(u - v) * (f(u) - f(v)) >= 0`` on every sample pair.

    This product is a square of a real number exactly when it is nonnegative,
    which is the algebraic form of monotonicity.
    """
    for u, v in samples:
        u, v = as_fraction(u), as_fraction(v)
        if (u - v) * (as_fraction(f(u)) - as_fraction(f(v))) < 0:
            return False
    return True
