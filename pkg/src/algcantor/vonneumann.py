"""Sparse ternary digits of the modified von Neumann map.

``psi(x, n) = 2**(n*n) - 2**floor(n*x)`` for integers ``n > x``, and
``sigma(x) = 2 * sum_{n > x} 3**-psi(x, n)``.  Since psi is strictly
increasing in n, sigma(x) is a ternary-set member whose only nonzero digits
are 2s at the positions psi(x, n).  Positions grow like ``2**(n*n)`` and are
kept as Python ints; nothing is ever expanded densely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .interval import as_fraction
from .ternary import EXACT, DigitPattern, TernaryDigits, cell_contains_rational

DEFAULT_POSITION_CAP = 2**100


def first_index(x) -> int:
    """Smallest integer n with n > x."""
    return math.floor(as_fraction(x)) + 1


def psi(x, n: int) -> int:
    x = as_fraction(x)
    if x <= 0:
        raise ValueError("psi is defined for positive x")
    if n <= x:
        raise ValueError(f"psi(x, n) needs n > x; got x={x}, n={n}")
    return 2 ** (n * n) - 2 ** math.floor(n * x)


@dataclass(frozen=True)
class SigmaValue:
    x: Fraction
    terms_used: int
    digits: TernaryDigits

    def to_json(self) -> dict:
        return {
            "x": f"{self.x.numerator}/{self.x.denominator}",
            "terms_used": self.terms_used,
            "digits": self.digits.to_json(),
        }


def sigma_digits(x, terms: int, position_cap: int = DEFAULT_POSITION_CAP) -> SigmaValue:
    """Digits of sigma(x) from its first ``terms`` summands."""
    x = as_fraction(x)
    if x <= 0:
        raise ValueError("sigma is defined on positive reals")
    if terms < 1:
        raise ValueError("terms must be positive")
    start = first_index(x)
    entries = []
    for n in range(start, start + terms):
        pos = psi(x, n)
        if pos > position_cap:
            raise ValueError(f"position psi({x}, {n}) exceeds the cap 2**{position_cap.bit_length() - 1}")
        entries.append((pos, 2))
    return SigmaValue(x, terms, TernaryDigits(tuple(entries), depth=EXACT))


def injectivity_probe(xs, terms: int) -> dict:
    """Compare the digit-position sets of sigma at the given points.

    Equal position sets after finitely many terms prove nothing; such pairs
    are reported as indistinguishable at this depth rather than as collisions
    of sigma itself.
    """
    values = [as_fraction(x) for x in xs]
    if len(set(values)) != len(values):
        raise ValueError("points must be distinct")
    positions = {x: frozenset(sigma_digits(x, terms).digits.positions()) for x in values}
    indistinguishable = [
        (a, b) for a, b in combinations(values, 2) if positions[a] == positions[b]
    ]
    return {
        "terms": terms,
        "points": values,
        "distinct": not indistinguishable,
        "indistinguishable": indistinguishable,
    }


def _is_square(n: int) -> bool:
    r = math.isqrt(n)
    return r * r == n


def select_irrational_cell() -> DigitPattern:
    """Even-position pattern with a 2 at position 2k**2 for every k >= 1.

    The gaps between squares grow, so the stream is not eventually periodic
    and the partition cell it indexes contains no rational.
    """
    return DigitPattern(lambda n: 2 if _is_square(n) else 0, name="squares")


def irrational_cell_report(test_depth: int) -> dict:
    pattern = select_irrational_cell()
    return {
        "pattern": pattern.name,
        "test_depth": test_depth,
        "contains_rational": cell_contains_rational(pattern, test_depth),
        "digits": pattern.truncate(min(test_depth, 64)).to_json(),
    }
