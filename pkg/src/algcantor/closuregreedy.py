"""Greedy construction of two disjoint sets with independent union.

Given a finite closure system and a family ``D_1 .. D_N`` of subsets, step
``i`` picks ``x_i`` from ``D_i`` outside the closure of everything picked so
far, then ``y_i`` from ``D_i`` outside the closure of everything picked so far
including ``x_i``.  The result ``A = {x_i}``, ``B = {y_i}`` is disjoint, meets
every member twice over, and ``A | B`` is independent whenever the closure has
the exchange property (linear span does; that is what the tests use).
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable


class FamilyMemberExhausted(RuntimeError):
    """A family member lies inside the closure of the elements chosen so far."""

    def __init__(self, index: int, step: str):
        super().__init__(f"member {index} is exhausted at the {step} pick")
        self.index = index
        self.step = step


# closures ------------------------------------------------------------------------


def _gf2_reduce(basis: dict, v: int) -> int:
    # basis maps leading bit -> vector with that leading bit
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return v
        v ^= basis[top]
    return 0


def gf2_basis(vectors: Iterable[int]) -> dict:
    basis: dict = {}
    for v in vectors:
        r = _gf2_reduce(basis, v)
        if r:
            basis[r.bit_length() - 1] = r
    return basis


def gf2_rank(vectors: Iterable[int]) -> int:
    return len(gf2_basis(vectors))


def span_gf2(universe: frozenset):
    """Linear span over GF(2), restricted to ``universe`` (vectors as int bitmasks)."""

    def closure(xs: frozenset) -> frozenset:
        basis = gf2_basis(xs)
        return frozenset(u for u in universe if _gf2_reduce(basis, u) == 0)

    return closure


def identity_closure(universe: frozenset):
    return lambda xs: frozenset(xs)


def complement_closure(universe: frozenset):
    """Not a closure operator; used to exercise the audit."""
    return lambda xs: universe - frozenset(xs)


CLOSURES = {
    "span-gf2": span_gf2,
    "identity": identity_closure,
    "complement": complement_closure,
}


@dataclass(frozen=True)
class ClosureSystem:
    universe: frozenset
    closure_fn: Callable = field(compare=False)
    name: str = "custom"

    @classmethod
    def named(cls, name: str, universe) -> "ClosureSystem":
        if name not in CLOSURES:
            raise ValueError(f"unknown closure {name!r}; expected one of {sorted(CLOSURES)}")
        universe = frozenset(universe)
        return cls(universe, CLOSURES[name](universe), name)

    @classmethod
    def span(cls, dim: int) -> "ClosureSystem":
        """Nonzero vectors of GF(2)**dim under linear span."""
        return cls.named("span-gf2", range(1, 2**dim))

    def closure(self, xs) -> frozenset:
        xs = frozenset(xs)
        if not xs <= self.universe:
            raise ValueError(f"elements {sorted(xs - self.universe)} are not in the universe")
        return self.closure_fn(xs)


@dataclass(frozen=True)
class TargetFamily:
    members: tuple

    def __post_init__(self):
        members = tuple(frozenset(m) for m in self.members)
        for i, m in enumerate(members, start=1):
            if not m:
                raise ValueError(f"family member {i} is empty")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)


def least(xs):
    return min(xs)


def greedy_pair_build(sys: ClosureSystem, fam: TargetFamily, rho: Callable = least):
    """Returns ``(A, B)`` as lists in pick order."""
    xs: list = []
    ys: list = []
    for i, member in enumerate(fam.members, start=1):
        if not member <= sys.universe:
            raise ValueError(f"family member {i} is not inside the universe")
        free = member - sys.closure(xs + ys)
        if not free:
            raise FamilyMemberExhausted(i, "x")
        x = rho(free)
        xs.append(x)
        free = member - sys.closure(xs + ys)
        if not free:
            raise FamilyMemberExhausted(i, "y")
        ys.append(rho(free))
    return xs, ys


def independence_witness(sys: ClosureSystem, s) -> dict:
    """Which elements of ``s`` lie in the closure of the others.

    ``witness`` is the first element (in the given order) that lies in the
    closure of the elements before it, or None.
    """
    elems = list(dict.fromkeys(s))
    whole = frozenset(elems)
    dependent = [z for z in elems if z in sys.closure(whole - {z})]
    witness = None
    for i, z in enumerate(elems):
        if z in sys.closure(elems[:i]):
            witness = z
            break
    return {
        "size": len(elems),
        "dependent": dependent,
        "witness": witness,
        "independent": not dependent,
    }


def audit_closure(sys: ClosureSystem, sample_count: int, seed: int = 0) -> dict:
    """Spot-check the closure axioms on random subsets."""
    rng = random.Random(seed)
    universe = sorted(sys.universe)
    violations = {"extensive": [], "monotone": [], "idempotent": []}
    for _ in range(sample_count):
        xs = frozenset(u for u in universe if rng.random() < 0.3)
        ys = xs | frozenset(u for u in universe if rng.random() < 0.3)
        cx = sys.closure(xs)
        if not xs <= cx:
            violations["extensive"].append(sorted(xs))
        if not cx <= sys.closure(ys):
            violations["monotone"].append([sorted(xs), sorted(ys)])
        if sys.closure(cx) != cx:
            violations["idempotent"].append(sorted(xs))
    return {
        "closure": sys.name,
        "seed": seed,
        "samples": sample_count,
        "violations": {k: len(v) for k, v in violations.items()},
        "examples": {k: v[:3] for k, v in violations.items() if v},
        "ok": not any(violations.values()),
    }


# random instances and JSON --------------------------------------------------------


def random_spanning_member(dim: int, rng: random.Random) -> frozenset:
    """A random set of nonzero vectors of GF(2)**dim whose span is everything."""
    top = 2**dim - 1
    while True:
        size = rng.randint(dim, min(top, 3 * dim))
        member = frozenset(rng.sample(range(1, top + 1), size))
        if gf2_rank(member) == dim:
            return member


def random_instance(rng: random.Random, dims=(4, 10), sizes=(2, 20)):
    dim = rng.randint(*dims)
    n = rng.randint(*sizes)
    fam = TargetFamily(tuple(random_spanning_member(dim, rng) for _ in range(n)))
    return dim, ClosureSystem.span(dim), fam


def load_instance(obj) -> tuple:
    if not isinstance(obj, dict) or not {"universe", "closure", "family"} <= obj.keys():
        raise ValueError('instance needs "universe", "closure" and "family"')
    sys = ClosureSystem.named(obj["closure"], obj["universe"])
    return sys, TargetFamily(tuple(obj["family"]))


def instance_to_json(sys: ClosureSystem, fam: TargetFamily) -> dict:
    return {
        "universe": sorted(sys.universe),
        "closure": sys.name,
        "family": [sorted(m) for m in fam.members],
    }


def run_instance(sys: ClosureSystem, fam: TargetFamily, rho: Callable = least) -> dict:
    """Build, then re-check every postcondition; JSON-friendly report."""
    try:
        a, b = greedy_pair_build(sys, fam, rho)
    except FamilyMemberExhausted as exc:
        return {"ok": False, "exhausted": {"index": exc.index, "step": exc.step}}
    sa, sb = set(a), set(b)
    hits = [bool(m & sa) and bool(m & sb) for m in fam.members]
    report = independence_witness(sys, a + b)
    return {
        "ok": not (sa & sb) and all(hits) and report["independent"]
        and len(sa) == len(a) and len(sb) == len(b),
        "A": a,
        "B": b,
        "disjoint": not (sa & sb),
        "hits_all": all(hits),
        "independent": report["independent"],
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
