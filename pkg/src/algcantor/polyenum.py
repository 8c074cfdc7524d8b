"""Integer polynomials in ``n`` indeterminates and a fixed enumeration of them.

The enumeration ``enumerate_poly(n, m)`` is a bijection from the positive
integers onto the nonconstant polynomials of ``Z[X1..Xn]``.  Polynomials are
ordered first by *size* ``s = max(total degree, max |coefficient|)``, then,
within one size, lexicographically by their canonical serialization:

* the serialization of a size-``s`` polynomial is its coefficient vector over
  all monomials of degree ``<= s``, listed in ascending graded-lex order
  (``1, Xn, ..., X1, Xn^2, ...``), and
* coefficients compare in the order ``0, 1, -1, 2, -2, ...``.

So ``X1`` is the first polynomial in every arity, and the constant term is
the most significant coordinate (polynomials without a constant term come
first).  Ranking and unranking count lexicographic completions directly, so
neither walks the list.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import lcm
from typing import Iterable, Mapping, Sequence

from . import kernels
from .interval import Box, RationalInterval, as_fraction

__all__ = [
    "IntPolynomial",
    "enumerate_poly",
    "index_of",
    "evaluate",
    "evaluate_interval",
    "count_of_size",
]


@dataclass(frozen=True)
class IntPolynomial:
    n_vars: int
    terms: tuple  # ((exponent tuple, nonzero int coefficient), ...), canonical order
    _plan: tuple = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("n_vars must be positive")
        merged: dict = {}
        for exps, coef in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n_vars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {self.n_vars} variables")
            if not isinstance(coef, int):
                coef = int(coef)
            merged[exps] = merged.get(exps, 0) + coef
        terms = tuple(
            sorted(((e, c) for e, c in merged.items() if c != 0), key=lambda t: _mono_key(t[0]))
        )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_dict(cls, n_vars: int, coeffs: Mapping) -> "IntPolynomial":
        return cls(n_vars, tuple(coeffs.items()))

    @classmethod
    def variable(cls, n_vars: int, i: int) -> "IntPolynomial":
        """The indeterminate ``X_i`` (1-based)."""
        exps = [0] * n_vars
        exps[i - 1] = 1
        return cls(n_vars, ((tuple(exps), 1),))

    @classmethod
    def parse(cls, text: str, n_vars: int | None = None) -> "IntPolynomial":
        """Parse strings such as ``"X1^2 - 3*X1*X2 + 1"``."""
        return _parse(text, n_vars)

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    @property
    def height(self) -> int:
        return max((abs(c) for _, c in self.terms), default=0)

    @property
    def size(self) -> int:
        return max(self.total_degree, self.height)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> int:
        return self.as_dict().get((0,) * self.n_vars, 0)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e, _ in self.terms), default=0)

    def horner_plan(self):
        """Nested Horner form consumed by the interval kernel (cached)."""
        if self._plan is None:
            degs = [self.degree_in(i) for i in range(self.n_vars)]
            plan = _build_plan(self.terms, 0, self.n_vars, degs)
            object.__setattr__(self, "_plan", (plan, degs))
        return self._plan

    def to_json(self) -> dict:
        return {
            "n": self.n_vars,
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, obj) -> "IntPolynomial":
        return cls(int(obj["n"]), tuple((tuple(t["exp"]), int(t["coef"])) for t in obj["terms"]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, coef in reversed(self.terms):
            mono = "*".join(
                f"X{i + 1}" if e == 1 else f"X{i + 1}^{e}" for i, e in enumerate(exps) if e
            )
            mag = abs(coef)
            body = mono if (mono and mag == 1) else (f"{mag}*{mono}" if mono else str(mag))
            sign = "-" if coef < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out


def _mono_key(exps):
    return (sum(exps), exps)


def _build_plan(terms, i, n, degs):
    if not terms:
        return None
    if i == n:
        assert len(terms) == 1
        return terms[0][1]
    buckets = [[] for _ in range(degs[i] + 1)]
    for exps, coef in terms:
        buckets[exps[i]].append((exps, coef))
    return tuple(_build_plan(b, i + 1, n, degs) for b in buckets)


_TERM = re.compile(r"([+-]?)\s*([^+-]+)")


def _parse(text: str, n_vars: int | None) -> IntPolynomial:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    raw = []
    max_var = 0
    for sign, body in _TERM.findall(s):
        coef = -1 if sign == "-" else 1
        exps: dict = {}
        for factor in body.split("*"):
            m = re.fullmatch(r"X(\d+)(?:\^(\d+))?", factor)
            if m:
                v = int(m.group(1))
                if v < 1:
                    raise ValueError("variables are numbered from X1")
                exps[v] = exps.get(v, 0) + int(m.group(2) or 1)
                max_var = max(max_var, v)
            elif re.fullmatch(r"\d+", factor):
                coef *= int(factor)
            else:
                raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
        raw.append((exps, coef))
    n = n_vars if n_vars is not None else max(max_var, 1)
    if max_var > n:
        raise ValueError(f"{text!r} uses X{max_var} but n_vars={n}")
    return IntPolynomial(n, tuple((tuple(e.get(i + 1, 0) for i in range(n)), c) for e, c in raw))


# enumeration ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _layout(n: int, s: int):
    """Monomials of degree <= s in ascending graded-lex order."""
    monos = []
    for d in range(s + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for v in combo:
                e[v] += 1
            monos.append(tuple(e))
    monos.sort(key=_mono_key)
    return tuple(monos)


def _symbol(c: int) -> int:
    return 0 if c == 0 else (2 * c - 1 if c > 0 else -2 * c)


def _coef(sym: int) -> int:
    return 0 if sym == 0 else ((sym + 1) // 2 if sym % 2 else -(sym // 2))


def _count_completions(n, s, start, nonconst_seen, top_seen):
    """Completions of positions ``start..`` giving a nonconstant size-``s`` polynomial."""
    monos = _layout(n, s)
    rest = monos[start:]
    a = len(rest)
    alpha = 2 * s + 1
    n_nonconst = sum(1 for e in rest if sum(e) > 0)
    n_top = sum(1 for e in rest if sum(e) == s)
    const_free = 1 if (rest and sum(rest[0]) == 0) else 0
    total = alpha**a
    no_nonconst = 0 if nonconst_seen else alpha ** (a - n_nonconst)
    no_top = 0 if top_seen else (2 * s - 1) ** (a - n_top)
    neither = 0 if (nonconst_seen or top_seen) else (2 * s - 1) ** const_free
    return total - no_nonconst - no_top + neither


def _advance(n, s, pos, sym, nonconst_seen, top_seen):
    deg = sum(_layout(n, s)[pos])
    c = _coef(sym)
    nonconst_seen = nonconst_seen or (deg > 0 and c != 0)
    top_seen = top_seen or abs(c) == s or (deg == s and c != 0)
    return nonconst_seen, top_seen


@lru_cache(maxsize=None)
def count_of_size(n: int, s: int) -> int:
    """Number of nonconstant polynomials in n variables of size exactly s."""
    if s < 1:
        return 0
    return _count_completions(n, s, 0, False, False)


@lru_cache(maxsize=8192)
def enumerate_poly(n: int, m: int) -> IntPolynomial:
    """The m-th (1-based) nonconstant integer polynomial in n variables."""
    if n < 1 or m < 1:
        raise ValueError("enumerate_poly needs n >= 1 and m >= 1")
    r = m - 1
    s = 1
    while r >= count_of_size(n, s):
        r -= count_of_size(n, s)
        s += 1
    monos = _layout(n, s)
    coeffs = {}
    state = (False, False)
    for pos in range(len(monos)):
        for sym in range(2 * s + 1):
            nxt = _advance(n, s, pos, sym, *state)
            c = _count_completions(n, s, pos + 1, *nxt)
            if r < c:
                state = nxt
                if sym:
                    coeffs[monos[pos]] = _coef(sym)
                break
            r -= c
        else:  # pragma: no cover - counts are exact
            raise AssertionError("unranking overran the layout")
    return IntPolynomial.from_dict(n, coeffs)


def index_of(p: IntPolynomial) -> int:
    """Inverse of :func:`enumerate_poly`: the m with ``enumerate_poly(p.n_vars, m) == p``."""
    if p.is_constant():
        raise ValueError("constant polynomials are not enumerated")
    n, s = p.n_vars, p.size
    rank = sum(count_of_size(n, t) for t in range(1, s))
    coeffs = p.as_dict()
    state = (False, False)
    for pos, mono in enumerate(_layout(n, s)):
        target = _symbol(coeffs.get(mono, 0))
        for sym in range(target):
            rank += _count_completions(n, s, pos + 1, *_advance(n, s, pos, sym, *state))
        state = _advance(n, s, pos, target, *state)
    return rank + 1


# evaluation ---------------------------------------------------------------------


def evaluate(p: IntPolynomial, point: Sequence) -> Fraction:
    """Exact value of p at a rational point (direct term summation)."""
    if len(point) != p.n_vars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {p.n_vars}")
    xs = [as_fraction(x) for x in point]
    total = Fraction(0)
    for exps, coef in p.terms:
        t = Fraction(coef)
        for x, e in zip(xs, exps):
            if e:
                t *= x**e
        total += t
    return total


def scaled_box(box: Box):
    """Integer endpoints and per-variable denominators for the kernel."""
    lo, hi, den = [], [], []
    for f in box.factors:
        d = lcm(f.lo.denominator, f.hi.denominator)
        lo.append(f.lo.numerator * (d // f.lo.denominator))
        hi.append(f.hi.numerator * (d // f.hi.denominator))
        den.append(d)
    return lo, hi, den


def evaluate_interval(p: IntPolynomial, box: Box, kernel=None) -> RationalInterval:
    """Sound enclosure of ``{p(x) : x in box}`` by per-variable interval Horner."""
    if box.arity != p.n_vars:
        raise ValueError(f"box has {box.arity} factors, polynomial has {p.n_vars} variables")
    plan, degs = p.horner_plan()
    lo, hi, den = scaled_box(box)
    kernel = kernel or kernels.horner_enclosure
    lo_num, hi_num = kernel(plan, degs, lo, hi, den)
    scale = 1
    for d, e in zip(den, degs):
        scale *= d**e
    return RationalInterval(Fraction(lo_num, scale), Fraction(hi_num, scale))


def polys_up_to(n: int, m_max: int) -> Iterable[tuple[int, IntPolynomial]]:
    for m in range(1, m_max + 1):
        yield m, enumerate_poly(n, m)
