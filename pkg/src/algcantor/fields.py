"""Exact arithmetic in F(theta), theta**3 = 2, over rational function fields.

F is the field of rational functions in named transcendentals ``t1, t2, ...``
with rational coefficients.  Elements of F(theta) are ``a + b*theta +
c*theta**2`` with a, b, c in F; since ``X**3 - 2`` is irreducible over F the
three coordinates are unique, which is what makes the distinctness
certificates below checkable by comparing coordinates.
"""
from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

from .polyenum import IntPolynomial


# sparse polynomials over named symbols ----------------------------------------------


@lru_cache(maxsize=None)
def symbol_key(name: str):
    """Sort key putting t2 before t10."""
    m = re.fullmatch(r"([A-Za-z_]+)(\d*)", name)
    if not m:
        return (name, -1)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


def _mono_key(mono: tuple):
    # graded order, then by exponents along the sorted symbol list
    return (sum(e for _, e in mono), tuple((symbol_key(s), e) for s, e in mono))


class SymPoly:
    """Integer polynomial keyed by monomials ``((symbol, exp), ...)``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(sorted(((s, int(e)) for s, e in mono if e), key=lambda t: symbol_key(t[0])))
            if c:
                clean[mono] = clean.get(mono, 0) + int(c)
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def const(cls, c: int) -> "SymPoly":
        return cls({(): c})

    @classmethod
    def symbol(cls, name: str) -> "SymPoly":
        return cls({((name, 1),): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def symbols(self) -> set:
        return {s for mono in self.terms for s, _ in mono}

    def degree_in(self, name: str) -> int:
        return max((e for mono in self.terms for s, e in mono if s == name), default=0)

    def content(self) -> int:
        return reduce(math.gcd, (abs(c) for c in self.terms.values()), 0)

    def leading_coefficient(self) -> int:
        if not self.terms:
            return 0
        return self.terms[max(self.terms, key=_mono_key)]

    def scale_div(self, k: int) -> "SymPoly":
        return SymPoly({m: c // k for m, c in self.terms.items()})

    def __add__(self, other: "SymPoly") -> "SymPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SymPoly(out)

    def __neg__(self) -> "SymPoly":
        return SymPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def __mul__(self, other) -> "SymPoly":
        if isinstance(other, int):
            return SymPoly({m: c * other for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                exps = dict(m1)
                for s, e in m2:
                    exps[s] = exps.get(s, 0) + e
                key = tuple(sorted(exps.items(), key=lambda t: symbol_key(t[0])))
                out[key] = out.get(key, 0) + c1 * c2
        return SymPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, SymPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=_mono_key, reverse=True):
            c = self.terms[mono]
            factors = [s if e == 1 else f"{s}^{e}" for s, e in mono]
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


class MultivariateRational:
    """Element of Q(t1, t2, ...) as a content-normalized quotient.

    Numerator and denominator are divided by the gcd of all their integer
    coefficients and the denominator's leading coefficient is made positive.
    No polynomial gcd is taken, so equality compares ``a*d == b*c``; the
    objects are therefore unhashable.
    """

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(self, num, den=None):
        num = _as_sympoly(num)
        den = SymPoly.const(1) if den is None else _as_sympoly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = SymPoly.const(1)
        num, den = _cancel_monomial(num, den)
        if num.terms.keys() == den.terms.keys():
            # proportional supports: the quotient may be a constant
            m = next(iter(num.terms))
            q = Fraction(num.terms[m], den.terms[m])
            if all(Fraction(num.terms[k], den.terms[k]) == q for k in num.terms):
                num, den = SymPoly.const(q.numerator), SymPoly.const(q.denominator)
        g = math.gcd(num.content(), den.content())
        if den.leading_coefficient() < 0:
            g = -g
        self.num = num.scale_div(g)
        self.den = den.scale_div(g)

    @classmethod
    def symbol(cls, name: str) -> "MultivariateRational":
        return cls(SymPoly.symbol(name))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def symbols(self) -> set:
        return self.num.symbols() | self.den.symbols()

    def __add__(self, other):
        other = _as_rational(other)
        return MultivariateRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return MultivariateRational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rational(other))

    def __rsub__(self, other):
        return _as_rational(other) - self

    def __mul__(self, other):
        other = _as_rational(other)
        return MultivariateRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rational(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        return MultivariateRational(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        try:
            other = _as_rational(other)
        except TypeError:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __str__(self) -> str:
        if self.den == SymPoly.const(1):
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _cancel_monomial(num: SymPoly, den: SymPoly):
    """Divide out the largest monomial dividing every term of both."""
    monos = list(num.terms) + list(den.terms)
    common = None
    for mono in monos:
        exps = dict(mono)
        common = exps if common is None else {s: min(e, exps.get(s, 0)) for s, e in common.items()}
    common = {s: e for s, e in (common or {}).items() if e}
    if not common:
        return num, den

    def shift(p):
        return SymPoly({
            tuple((s, e - common.get(s, 0)) for s, e in mono): c for mono, c in p.terms.items()
        })

    return shift(num), shift(den)


def _as_sympoly(x) -> SymPoly:
    if isinstance(x, SymPoly):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return SymPoly.const(x)
    raise TypeError(f"cannot use {x!r} as a polynomial")


def _as_rational(x) -> MultivariateRational:
    if isinstance(x, MultivariateRational):
        return x
    if isinstance(x, Fraction):
        return MultivariateRational(x.numerator, x.denominator)
    if isinstance(x, (int, SymPoly)) and not isinstance(x, bool):
        return MultivariateRational(x)
    raise TypeError(f"cannot use {x!r} as a rational function")


# F(theta) -----------------------------------------------------------------------------


class ThetaElement:
    """``a + b*theta + c*theta**2`` with ``theta**3 == 2``."""

    __slots__ = ("a", "b", "c")
    __hash__ = None

    def __init__(self, a=0, b=0, c=0):
        self.a, self.b, self.c = _as_rational(a), _as_rational(b), _as_rational(c)

    @classmethod
    def theta(cls) -> "ThetaElement":
        return cls(0, 1, 0)

    def coords(self) -> tuple:
        return self.a, self.b, self.c

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coords())

    def is_theta_free(self) -> bool:
        return self.b.is_zero() and self.c.is_zero()

    def __add__(self, other):
        other = _as_theta(other)
        return ThetaElement(self.a + other.a, self.b + other.b, self.c + other.c)

    __radd__ = __add__

    def __neg__(self):
        return ThetaElement(-self.a, -self.b, -self.c)

    def __sub__(self, other):
        return self + (-_as_theta(other))

    def __mul__(self, other):
        other = _as_theta(other)
        a, b, c = self.coords()
        d, e, f = other.coords()
        return ThetaElement(
            a * d + 2 * (b * f + c * e),
            a * e + b * d + 2 * (c * f),
            a * f + b * e + c * d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "ThetaElement":
        """Solve ``M v = (1, 0, 0)`` where M is multiplication by self."""
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        # clear denominators first: self = (A + B theta + C theta**2) / L with
        # polynomial A, B, C, so the linear algebra stays polynomial
        (na, da), (nb, db), (nc, dc) = ((x.num, x.den) for x in self.coords())
        lcm = da * db * dc
        a, b, c = (_as_rational(p) for p in (na * db * dc, nb * da * dc, nc * da * db))
        # columns of M are self, self*theta, self*theta**2 in the basis 1, theta, theta**2
        m = [[a, 2 * c, 2 * b], [b, a, 2 * c], [c, b, a]]
        det = _det3(m)
        rhs = [1, 0, 0]
        sol = []
        for col in range(3):
            mc = [[rhs[r] if k == col else m[r][k] for k in range(3)] for r in range(3)]
            sol.append(_det3(mc) * _as_rational(lcm) / det)
        return ThetaElement(*sol)

    def __truediv__(self, other):
        return self * _as_theta(other).inverse()

    def __eq__(self, other) -> bool:
        try:
            other = _as_theta(other)
        except TypeError:
            return NotImplemented
        return all(x == y for x, y in zip(self.coords(), other.coords()))

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c)}

    def __repr__(self) -> str:
        return f"ThetaElement({self.a}, {self.b}, {self.c})"


def _det3(m) -> MultivariateRational:
    (a, b, c), (d, e, f), (g, h, i) = m
    return _as_rational(a) * (e * i - f * h) - _as_rational(b) * (d * i - f * g) + _as_rational(c) * (d * h - e * g)


def _as_theta(x) -> ThetaElement:
    if isinstance(x, ThetaElement):
        return x
    return ThetaElement(_as_rational(x))


def theta_arith(op: str, e1: ThetaElement, e2: ThetaElement | None = None) -> ThetaElement:
    if op == "add":
        return e1 + e2
    if op == "mul":
        return e1 * e2
    if op == "inv":
        return e1.inverse()
    raise ValueError(f"unknown operation {op!r}")


# generator sets and certificates -------------------------------------------------------

PLAIN = "plain"
SCALED = "theta-scaled"


@dataclass(frozen=True)
class GeneratorSet:
    """Tags each symbol of S | T as plain or theta-scaled (x -> x*theta)."""

    S: frozenset
    T: frozenset
    U: frozenset

    @property
    def tags(self) -> dict:
        out = {s: PLAIN for s in self.S | self.U}
        out.update({t: SCALED for t in self.T - self.U})
        return dict(sorted(out.items(), key=lambda kv: symbol_key(kv[0])))

    def element(self, name: str) -> ThetaElement:
        x = MultivariateRational.symbol(name)
        return ThetaElement(x) if self.tags[name] == PLAIN else ThetaElement(0, x, 0)

    def elements(self) -> dict:
        return {name: self.element(name) for name in self.tags}

    def to_json(self) -> dict:
        return {"tags": self.tags}


def g_map(S, T, U) -> GeneratorSet:
    S, T, U = frozenset(S), frozenset(T), frozenset(U)
    if S & T:
        raise ValueError(f"S and T overlap in {sorted(S & T, key=symbol_key)}")
    if not U <= T:
        raise ValueError("U must be a subset of T")
    return GeneratorSet(S, T, U)


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


def eisenstein_check(p: IntPolynomial, q: int) -> bool:
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    if p.n_vars != 1:
        raise ValueError("eisenstein_check needs a univariate polynomial")
    if p.is_constant():
        raise ValueError("polynomial is constant")
    coefs = {e[0]: c for e, c in p.as_dict().items()}
    deg = max(coefs)
    lead = coefs[deg]
    const = coefs.get(0, 0)
    return (
        all(coefs.get(i, 0) % q == 0 for i in range(deg))
        and lead % q != 0
        and const % (q * q) != 0
    )


CUBE_ROOT_POLY = IntPolynomial.parse("X1^3 - 2", n_vars=1)


def sqrt_tower_degree(adjunction_count: int) -> tuple:
    """Degree bound after n square-root adjunctions, and whether the cube root of 2 can lie in it.

    Each adjunction at most doubles the degree, so every element has degree
    dividing a power of 2; the cube root of 2 has degree 3.
    """
    if adjunction_count < 0:
        raise ValueError("adjunction_count must be nonnegative")
    bound = 2**adjunction_count
    contains = bound % 3 == 0 and eisenstein_check(CUBE_ROOT_POLY, 2)
    return bound, contains


class _Equal:
    def __repr__(self):
        return "Equal"

    def to_json(self):
        return {"equal": True}


Equal = _Equal()


@dataclass(frozen=True)
class DistinctnessCertificate:
    witness: str
    tag_in_v: str
    tag_in_w: str
    quotient: ThetaElement
    plain_theta_free: bool
    eisenstein_ok: bool

    def to_json(self) -> dict:
        return {
            "witness": self.witness,
            "quotient": self.quotient.to_json(),
            "eisenstein": {"poly": "X^3-2", "prime": 2, "ok": self.eisenstein_ok},
        }

    def check(self) -> bool:
        return (
            {self.tag_in_v, self.tag_in_w} == {PLAIN, SCALED}
            and self.quotient == ThetaElement.theta()
            and self.plain_theta_free
            and self.eisenstein_ok
        )


def distinctness_certificate(gV: GeneratorSet, gW: GeneratorSet):
    """Equal when the two generator sets coincide, else a checked certificate.

    For a symbol x tagged plain on one side and theta-scaled on the other, a
    field containing both generator sets contains x and x*theta, hence their
    quotient theta; but every plain generator has zero theta coordinates and
    theta has theta coordinate 1, and theta is not in F because X**3 - 2 is
    Eisenstein at 2.
    """
    if gV.S != gW.S or gV.T != gW.T:
        raise ValueError("generator sets come from different (S, T)")
    if gV.U == gW.U:
        return Equal
    x = min(gV.U ^ gW.U, key=symbol_key)
    ev, ew = gV.element(x), gW.element(x)
    plain, scaled = (ev, ew) if gV.tags[x] == PLAIN else (ew, ev)
    quotient = scaled / plain
    plain_gens = [g.element(s) for g in (gV, gW) for s, t in g.tags.items() if t == PLAIN]
    # products and sums of plain generators stay theta free
    closure_sample = reduce(lambda u, v: u * v + u, plain_gens, ThetaElement(1))
    theta_free = all(g.is_theta_free() for g in plain_gens) and closure_sample.is_theta_free()
    cert = DistinctnessCertificate(
        witness=x,
        tag_in_v=gV.tags[x],
        tag_in_w=gW.tags[x],
        quotient=quotient,
        plain_theta_free=theta_free and not quotient.is_theta_free(),
        eisenstein_ok=eisenstein_check(CUBE_ROOT_POLY, 2),
    )
    if not cert.check():  # pragma: no cover - would mean broken arithmetic
        raise AssertionError(f"certificate for witness {x} does not check")
    return cert


def translate_disjoint(field_gens, xi: str, samples: int = 20, seed: int = 0) -> dict:
    """Check that ``xi + k1 = k2`` has no solution with k1, k2 in Q(field_gens).

    Every element of Q(field_gens) has numerator and denominator free of the
    fresh symbol, while ``xi * den`` has degree 1 in it, so ``xi = k2 - k1``
    is impossible.  Random elements are sampled to exhibit the degree gap.
    """
    gens = sorted(set(field_gens), key=symbol_key)
    if xi in gens:
        raise ValueError(f"{xi} is already a generator")
    rng = random.Random(seed)
    checked = []
    for _ in range(samples):
        k1 = random_rational_function(gens, rng)
        k2 = random_rational_function(gens, rng)
        diff = k2 - k1
        lhs = MultivariateRational.symbol(xi)
        # xi == diff  <=>  xi * diff.den == diff.num
        left = SymPoly.symbol(xi) * diff.den
        ok = (
            xi not in diff.symbols()
            and left.degree_in(xi) == 1
            and diff.num.degree_in(xi) == 0
            and not (lhs == diff)
        )
        checked.append(ok)
    return {
        "generators": gens,
        "fresh": xi,
        "identity": f"{xi} + k1 - k2 = 0",
        "samples": samples,
        "seed": seed,
        "verified": all(checked),
    }


def random_rational_function(
    gens, rng: random.Random, max_terms: int = 3, polynomial: bool = False
) -> MultivariateRational:
    def poly():
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            mono = tuple((g, rng.randint(0, 2)) for g in gens)
            terms[mono] = terms.get(mono, 0) + rng.randint(-5, 5)
        p = SymPoly(terms)
        return p if not p.is_zero() else SymPoly.const(rng.choice([1, 2, 3]))

    if polynomial:
        return MultivariateRational(poly(), rng.randint(1, 6))
    return MultivariateRational(poly(), poly())


def random_theta_element(
    gens, rng: random.Random, nonzero: bool = True, polynomial: bool = True
) -> ThetaElement:
    """Random element; coordinates are polynomials over Q unless ``polynomial=False``."""
    while True:
        e = ThetaElement(*(random_rational_function(gens, rng, polynomial=polynomial) for _ in range(3)))
        for i in range(3):
            if rng.random() < 0.25:
                e = ThetaElement(*[0 if k == i else x for k, x in enumerate(e.coords())])
        if not nonzero or not e.is_zero():
            return e


def subsets(T) -> list:
    T = sorted(T, key=symbol_key)
    return [frozenset(x for i, x in enumerate(T) if mask >> i & 1) for mask in range(2 ** len(T))]
