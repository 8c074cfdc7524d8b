"""Finite-depth exact arithmetic for the Cantor ternary set.

A member of the ternary set is written ``sum a_p 3**-p`` with every digit in
``{0, 2}``.  :class:`TernaryDigits` stores digits sparsely, keyed by position,
so that positions like ``2**16`` (see :mod:`algcantor.vonneumann`) cost one
entry.  A finite-depth approximation of the ternary set is the union of the
``2**k`` closed intervals of stage ``k`` of the middle-thirds construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping

from .interval import RationalInterval, as_fraction

EXACT = "exact"


@dataclass(frozen=True)
class TernaryDigits:
    """Sparse ternary digit string.

    ``entries`` maps positions (>= 1) to nonzero digits; zero digits are
    dropped on construction.  ``depth`` is either an int, meaning digits past
    it are not determined by this object except through ``tail``, or
    ``"exact"``, meaning every unlisted digit is 0.  ``tail`` (0 or 2) is the
    digit repeated at every position past an integer ``depth``; it lets a
    finite object denote values such as ``0.0222..._3 = 1/9`` exactly.
    """

    entries: tuple
    depth: object = EXACT
    tail: int = 0

    def __post_init__(self):
        items = self.entries.items() if isinstance(self.entries, Mapping) else self.entries
        cleaned = {}
        for pos, digit in items:
            pos, digit = int(pos), int(digit)
            if pos < 1:
                raise ValueError(f"digit positions start at 1, got {pos}")
            if digit not in (0, 1, 2):
                raise ValueError(f"ternary digit must be 0, 1 or 2, got {digit}")
            if pos in cleaned:
                raise ValueError(f"position {pos} listed twice")
            cleaned[pos] = digit
        entries = tuple(sorted((p, d) for p, d in cleaned.items() if d))
        depth = self.depth
        if depth != EXACT:
            depth = int(depth)
            if depth < 1:
                raise ValueError("depth must be positive or 'exact'")
            if entries and entries[-1][0] > depth:
                raise ValueError("listed position beyond depth")
        if self.tail not in (0, 2):
            raise ValueError("tail digit must be 0 or 2")
        if self.tail and depth == EXACT:
            raise ValueError("a repeating tail needs an integer depth")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "depth", depth)

    @classmethod
    def from_digits(cls, digits: Iterable[int], tail: int = 0) -> "TernaryDigits":
        """Dense constructor: ``digits[0]`` is position 1; depth = len(digits)."""
        digits = list(digits)
        return cls(tuple(enumerate(digits, start=1)), depth=len(digits), tail=tail)

    def digit(self, pos: int) -> int:
        for p, d in self.entries:
            if p == pos:
                return d
        if self.depth != EXACT and pos > self.depth:
            return self.tail
        return 0

    def dense(self, depth: int) -> list:
        """Digits at positions 1..depth (only sensible for small depth)."""
        return [self.digit(p) for p in range(1, depth + 1)]

    def positions(self) -> list:
        return [p for p, _ in self.entries]

    def is_cantor_member(self) -> bool:
        return all(d in (0, 2) for _, d in self.entries)

    def exact_value(self) -> Fraction:
        """Value of the full digit sequence, including a repeating tail."""
        v = sum((Fraction(d, 3**p) for p, d in self.entries), Fraction(0))
        if self.tail:
            # sum_{p > depth} 2 * 3**-p == 3**-depth
            v += Fraction(1, 3**self.depth)
        return v

    def to_json(self) -> dict:
        obj = {
            "entries": [{"pos": str(p), "digit": d} for p, d in self.entries],
            "depth": self.depth,
        }
        if self.tail:
            obj["tail"] = self.tail
        return obj

    @classmethod
    def from_json(cls, obj) -> "TernaryDigits":
        return cls(
            tuple((int(e["pos"]), int(e["digit"])) for e in obj["entries"]),
            depth=obj.get("depth", EXACT),
            tail=int(obj.get("tail", 0)),
        )


def value_of(d: TernaryDigits, depth: int) -> Fraction:
    """Truncated value: sum of ``digit(p) * 3**-p`` over listed ``p <= depth``."""
    if depth < 1:
        raise ValueError("depth must be positive")
    return sum((Fraction(dig, 3**p) for p, dig in d.entries if p <= depth), Fraction(0))


def standard_interval(k: int, j: int) -> RationalInterval:
    """``J_{k,j}``: the j-th closed interval of stage k of the middle-thirds set."""
    if k < 1:
        raise ValueError("stage k must be positive")
    if not 1 <= j <= 2**k:
        raise ValueError(f"index j={j} outside [1, {2**k}]")
    # the binary digits of j-1 (most significant first) pick digits 0/2
    bits = j - 1
    lo = Fraction(0)
    for p in range(1, k + 1):
        if (bits >> (k - p)) & 1:
            lo += Fraction(2, 3**p)
    return RationalInterval(lo, lo + Fraction(1, 3**k))


def standard_level(k: int) -> list:
    return [standard_interval(k, j) for j in range(1, 2**k + 1)]


def in_standard_truncation(x, k: int) -> bool:
    """Whether x lies in the union of the stage-k standard intervals."""
    x = as_fraction(x)
    if not 0 <= x <= 1:
        return False
    lo, width = Fraction(0), Fraction(1)
    for _ in range(k):
        width /= 3
        if x <= lo + width:
            continue
        if x >= lo + 2 * width:
            lo += 2 * width
            continue
        return False
    return True


def sum_decompose(y, depth: int, approximate: bool = False):
    """Split y in [0, 2] as a sum of two ternary-set members.

    Positions are scanned left to right; at each one the lexicographically
    smallest digit pair in ``{0,2}**2`` that leaves a residue still reachable by
    the remaining positions is taken.  Whatever residue is left after
    ``depth`` positions is ``r * 3**-depth`` with ``r`` in ``{0, 1, 2}`` when y
    has denominator dividing ``3**depth``; it is absorbed by repeating tails
    (r=0: none, r=1: second summand gets a 2-tail, r=2: both do), so
    ``d1.exact_value() + d2.exact_value() == y`` exactly.

    With ``approximate=True`` any rational y in [0, 2] is accepted and the two
    depth-``depth`` truncations are returned without tails.
    """
    y = as_fraction(y)
    if depth < 1:
        raise ValueError("depth must be positive")
    if not 0 <= y <= 2:
        raise ValueError(f"{y} is outside [0, 2]")
    if not approximate and (3**depth) % y.denominator:
        raise ValueError(f"denominator of {y} does not divide 3**{depth}")
    pairs = ((0, 0), (0, 2), (2, 0), (2, 2))
    first, second = [], []
    residue = y
    for p in range(1, depth + 1):
        unit = Fraction(1, 3**p)
        # after position p the remaining positions can add at most 2 * 3**-p
        for a, b in pairs:
            rest = residue - (a + b) * unit
            if 0 <= rest <= 2 * unit:
                break
        else:  # pragma: no cover - residue invariant keeps a pair available
            raise AssertionError("no admissible digit pair")
        first.append(a)
        second.append(b)
        residue = rest
    if approximate:
        return TernaryDigits.from_digits(first), TernaryDigits.from_digits(second)
    r = residue * 3**depth
    tails = {0: (0, 0), 1: (0, 2), 2: (2, 2)}[int(r)]
    return (
        TernaryDigits.from_digits(first, tail=tails[0]),
        TernaryDigits.from_digits(second, tail=tails[1]),
    )


def partition_cell(x: TernaryDigits, depth: int) -> list:
    """Finite-depth hull of the cell ``x + 3*D``.

    ``D`` holds the ternary-set members supported on even positions, so
    ``3*D`` is supported on odd positions and ``x + 3*D`` keeps x's even
    digits while the odd digits range freely over {0, 2}.  At ``depth`` the
    cell is covered by the stage-``2*depth`` standard intervals whose even
    digits agree with x: one per choice of the first ``depth`` odd digits.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    for p, dig in x.entries:
        if p % 2:
            raise ValueError(f"pattern has a digit at odd position {p}")
        if dig != 2:
            raise ValueError(f"pattern digit {dig} at position {p} is not in {{0, 2}}")
        if p > 2 * depth:
            raise ValueError(f"pattern digit at position {p} exceeds 2*depth={2 * depth}")
    k = 2 * depth
    base = value_of(x, k) if x.entries else Fraction(0)
    cells = []
    for odd in product((0, 2), repeat=depth):
        lo = base + sum((Fraction(dig, 3 ** (2 * i + 1)) for i, dig in enumerate(odd)), Fraction(0))
        cells.append(RationalInterval(lo, lo + Fraction(1, 3**k)))
    cells.sort()
    return cells


def even_patterns(depth: int) -> list:
    """All 2**depth patterns with digits in {0,2} at even positions <= 2*depth."""
    out = []
    for digits in product((0, 2), repeat=depth):
        out.append(
            TernaryDigits(
                tuple((2 * (i + 1), d) for i, d in enumerate(digits)), depth=2 * depth
            )
        )
    return out


class DigitPattern:
    """An infinite even-position digit stream given by a rule.

    ``rule(n)`` is the digit at position ``2n`` (n >= 1); odd positions are 0.
    """

    def __init__(self, rule: Callable[[int], int], name: str = "pattern"):
        self.rule = rule
        self.name = name

    def even_digit(self, n: int) -> int:
        return self.rule(n)

    def truncate(self, depth: int) -> TernaryDigits:
        """Digits at positions <= 2*depth as a TernaryDigits."""
        return TernaryDigits(
            tuple((2 * n, self.rule(n)) for n in range(1, depth + 1)), depth=2 * depth
        )

    def __repr__(self) -> str:
        return f"DigitPattern({self.name})"


def _even_stream(x, n: int) -> list:
    if isinstance(x, DigitPattern):
        return [x.even_digit(i) for i in range(1, n + 1)]
    if isinstance(x, TernaryDigits):
        return [x.digit(2 * i) for i in range(1, n + 1)]
    if callable(x):
        return [x(i) for i in range(1, n + 1)]
    stream = list(x)[:n]
    if len(stream) < n:
        raise ValueError(f"need {n} digits, got {len(stream)}")
    return stream


def find_eventual_period(seq: list):
    """Smallest (preperiod, period) witnessed by ``seq``, or None.

    A candidate counts as witnessed when the periodic part spans at least two
    full periods and at least half of the window (``preperiod <= len/2``), so
    a long run of zeros at the very end of the window does not qualify.
    """
    n = len(seq)
    for t in range(0, n // 2 + 1):
        for p in range(1, (n - t) // 2 + 1):
            if all(seq[i] == seq[i + p] for i in range(t, n - p)):
                return t, p
    return None


def cell_contains_rational(x, test_depth: int) -> str:
    """``"yes"`` if the even-digit stream is visibly eventually periodic.

    A rational has an eventually periodic ternary expansion, and then every
    subsequence at a fixed stride is eventually periodic too; conversely an
    eventually periodic even stream with zero odd digits is a rational in the
    cell.  Returns ``"no-up-to-depth"`` when no period is witnessed within
    the first ``test_depth`` even digits.
    """
    seq = _even_stream(x, test_depth)
    return "yes" if find_eventual_period(seq) is not None else "no-up-to-depth"
