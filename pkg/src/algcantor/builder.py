"""Nested-interval construction of a Cantor set avoiding polynomial zero sets.

Level ``k`` of a :class:`CantorApproximation` holds ``2**k`` pairwise disjoint
closed intervals, increasing left to right, each level nested in the previous
one (interval ``j`` at level ``k`` contains intervals ``2j-1`` and ``2j`` at
level ``k+1``).  For every level ``k`` the builder certifies, for each arity
``n <= n_max`` (capped by ``2**k``) and each injection ``phi`` of
``{1..n}`` into the level-``k`` intervals, that ``enumerate_poly(n, m)`` has no
zero on the box ``prod phi(i)``.  The polynomial indices ``m`` checked at level
``k`` are ``{k}``, plus ``1..poly_prefix`` when ``k`` is the final level
``k_max``.  The deepest level therefore separates every tuple of points taken
from distinct deepest intervals from the first ``poly_prefix`` zero sets.

Modes
-----
``free``
    children are the outer quarters of their parent (``[0,1]`` for level 1).
``standard``
    the target tree is the middle-thirds tree, so ``I_{k,j}`` lies in
    ``J_{k,j}``.
``target``
    every interval lies in the interval with the same index of a given target
    tree whose depth is at least ``k_max``.

In the embedded modes a non-final interval may only be trimmed so that it
still reaches strictly into the leftmost and the rightmost of its depth-
``k_max`` target descendants (its *core*); otherwise a later level could have
no room left inside the target.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations
from pathlib import Path

from .boxcert import (
    CERTIFIED,
    BudgetExhausted,
    Certificate,
    certify_nonvanishing,
    read_ledger,
    search_avoiding_box,
    write_ledger,
)
from .interval import Box, RationalInterval, as_fraction, format_rational
from .polyenum import IntPolynomial, enumerate_poly, evaluate, evaluate_interval
from .ternary import standard_level

MODES = ("standard", "target", "free")
DEFAULT_BUDGET = 100_000
DEFAULT_PREFIX = 50


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Caps:
    k_max: int
    n_max: int = 2
    budget: int = DEFAULT_BUDGET
    poly_prefix: int = DEFAULT_PREFIX

    def __post_init__(self):
        for name in ("k_max", "n_max", "budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.poly_prefix < 0:
            raise ValueError("poly_prefix must be nonnegative")

    def to_json(self) -> dict:
        return {
            "k_max": self.k_max,
            "n_max": self.n_max,
            "budget": self.budget,
            "poly_prefix": self.poly_prefix,
        }


@dataclass
class CantorApproximation:
    mode: str
    levels: list  # levels[k-1] is level k
    caps: Caps
    ledger: list = field(default_factory=list)
    target: "CantorApproximation | None" = None
    certified_depth: int = 0

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> list:
        return self.levels[k - 1]

    def deepest(self) -> list:
        return self.levels[-1]

    def is_complete(self) -> bool:
        return self.depth == self.caps.k_max and self.certified_depth == self.depth

    def copy(self) -> "CantorApproximation":
        return replace(self, levels=[list(lv) for lv in self.levels], ledger=list(self.ledger))


def standard_tree(depth: int) -> CantorApproximation:
    """The middle-thirds tree ``J_{k,j}`` for ``k <= depth`` (no certificates)."""
    return CantorApproximation(
        mode="standard",
        levels=[standard_level(k) for k in range(1, depth + 1)],
        caps=Caps(k_max=depth, n_max=1, budget=1, poly_prefix=0),
    )


def check_invariants(approx: CantorApproximation) -> list:
    """Violated structural invariants, as messages (empty when all hold)."""
    problems = []
    widths = []
    for k, level in enumerate(approx.levels, start=1):
        if len(level) != 2**k:
            problems.append(f"level {k} has {len(level)} intervals, expected {2**k}")
            continue
        for j, iv in enumerate(level):
            if iv.width <= 0:
                problems.append(f"I[{k},{j + 1}] has zero width")
        for j in range(len(level) - 1):
            if not level[j].hi < level[j + 1].lo:
                problems.append(f"I[{k},{j + 1}] and I[{k},{j + 2}] overlap or are out of order")
        if k > 1:
            parents = approx.levels[k - 2]
            for j, iv in enumerate(level):
                if len(parents) == 2 ** (k - 1) and not iv.issubset(parents[j // 2]):
                    problems.append(f"I[{k},{j + 1}] is not inside I[{k - 1},{j // 2 + 1}]")
        widths.append(max(iv.width for iv in level))
    for k in range(1, len(widths)):
        if not widths[k] < widths[k - 1]:
            problems.append(f"max width does not decrease from level {k} to {k + 1}")
    if approx.mode == "standard":
        for k, level in enumerate(approx.levels, start=1):
            for j, iv in enumerate(level):
                if iv.width > Fraction(1, 3**k):
                    problems.append(f"I[{k},{j + 1}] wider than 3^-{k}")
    if approx.target is not None:
        for k, level in enumerate(approx.levels, start=1):
            if k > approx.target.depth:
                problems.append(f"level {k} deeper than the target tree")
                continue
            for j, iv in enumerate(level):
                if not iv.issubset(approx.target.level(k)[j]):
                    problems.append(f"I[{k},{j + 1}] not inside target interval")
    for cert in approx.ledger:
        if cert.verdict != CERTIFIED or cert.enclosure.contains_zero():
            problems.append(f"ledger entry {cert.poly_index} at level {cert.level} is not certified")
    return problems


def new_approximation(mode: str, target: CantorApproximation | None = None, caps: Caps | None = None):
    """Level-1 pair of disjoint intervals; ledger empty."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if caps is None:
        raise ValueError("caps are required")
    if (target is not None) != (mode == "target"):
        raise ValueError("a target tree is given exactly in target mode")
    if mode == "standard":
        target = standard_tree(caps.k_max)
    if target is not None:
        problems = check_invariants(target)
        if problems:
            raise ValueError("malformed target: " + "; ".join(problems))
        if target.depth < caps.k_max:
            raise ValueError(f"target depth {target.depth} is below k_max={caps.k_max}")
        level1 = list(target.level(1))
    else:
        level1 = _quarter_children(RationalInterval(0, 1))
    return CantorApproximation(mode=mode, levels=[level1], caps=caps, target=target)


def _quarter_children(parent: RationalInterval) -> list:
    q = parent.width / 4
    return [RationalInterval(parent.lo, parent.lo + q), RationalInterval(parent.hi - q, parent.hi)]


def _children(approx: CantorApproximation, k: int) -> list:
    """Initial level-(k+1) intervals inside the (final) level-k intervals."""
    out = []
    for j, parent in enumerate(approx.level(k)):
        if approx.target is None:
            out.extend(_quarter_children(parent))
            continue
        for child in (2 * j, 2 * j + 1):
            region = parent.intersect(approx.target.level(k + 1)[child])
            if region is None or region.width <= 0:  # pragma: no cover - cores prevent this
                raise AssertionError(f"no room for child {child + 1} at level {k + 1}")
            out.append(region)
    return out


def _cores(approx: CantorApproximation, k: int) -> list:
    """Per-interval core at level k (None where the interval may shrink freely)."""
    kmax = approx.caps.k_max
    if approx.target is None or k >= kmax:
        return [None] * 2**k
    bottom = approx.target.level(kmax)
    span = 2 ** (kmax - k)
    return [
        RationalInterval(bottom[j * span].hi, bottom[(j + 1) * span - 1].lo) for j in range(2**k)
    ]


def poly_window(k: int, final: bool, poly_prefix: int) -> list:
    window = {k}
    if final:
        window.update(range(1, poly_prefix + 1))
    return sorted(window)


def conditions(k: int, n_max: int, window) -> list:
    """``(n, m, phi)`` triples required at level k; phi holds 0-based indices."""
    count = 2**k
    out = []
    for m in window:
        for j in range(count):
            out.append((1, m, (j,)))
    for n in range(2, min(count, n_max) + 1):
        for m in window:
            for phi in permutations(range(count), n):
                out.append((n, m, phi))
    return out


def _level_requirements(approx: CantorApproximation, k: int, n_max: int | None = None):
    final = k == approx.caps.k_max
    window = poly_window(k, final, approx.caps.poly_prefix)
    return conditions(k, n_max or approx.caps.n_max, window)


def _certify_level(approx: CantorApproximation, k: int, budget: int) -> int:
    """Shrink level-k intervals (in place) until every condition is certified.

    Returns the number of search nodes spent.  Enclosures are inclusion
    monotone, so a condition certified earlier stays certified when a later
    one shrinks a shared interval; the outer loop re-checks anyway and stops
    at the first pass without any shrinking.
    """
    level = approx.levels[k - 1]
    cores = _cores(approx, k)
    reqs = _level_requirements(approx, k)
    spent = 0
    changed = True
    while changed:
        changed = False
        for n, m, phi in reqs:
            p = enumerate_poly(n, m)
            box = Box(tuple(level[i] for i in phi))
            if not evaluate_interval(p, box).contains_zero():
                continue
            try:
                found, used = search_avoiding_box(
                    p, box, budget - spent, [cores[i] for i in phi]
                )
            except BudgetExhausted as exc:
                exc.context = {"level": k, "n": n, "m": m, "phi": tuple(i + 1 for i in phi)}
                raise BudgetExhausted(
                    f"budget exhausted certifying g_{n}({m}) on level-{k} intervals "
                    f"{exc.context['phi']}: {exc}",
                    nodes=spent + exc.nodes,
                    context=exc.context,
                ) from None
            spent += used
            for i, f in zip(phi, found.factors):
                level[i] = f
            changed = True
    certs = []
    for n, m, phi in reqs:
        box = Box(tuple(level[i] for i in phi))
        cert = certify_nonvanishing(
            enumerate_poly(n, m), box, (n, m), level=k, injection=tuple(i + 1 for i in phi)
        )
        if cert.verdict != CERTIFIED:  # pragma: no cover - guarded by the loop above
            raise AssertionError(f"condition {(n, m, phi)} lost its certificate")
        certs.append(cert)
    approx.ledger.extend(certs)
    approx.certified_depth = k
    return spent


def complete(approx: CantorApproximation) -> CantorApproximation:
    """Certify the deepest level if it is still pending (returns a new object)."""
    if approx.certified_depth >= approx.depth:
        return approx
    work = approx.copy()
    _certify_level(work, work.depth, work.caps.budget)
    return work


def extend_level(approx: CantorApproximation) -> CantorApproximation:
    """Append and certify level K+1; the input is left untouched on failure."""
    K = approx.depth
    if K >= approx.caps.k_max:
        raise CapExceeded(f"depth {K} already equals k_max={approx.caps.k_max}")
    work = approx.copy()
    budget = work.caps.budget
    spent = 0
    if work.certified_depth < K:
        spent += _certify_level(work, K, budget)
    work.levels.append(_children(work, K))
    _certify_level(work, K + 1, budget - spent)
    return work


def build(mode: str, caps: Caps, target: CantorApproximation | None = None) -> CantorApproximation:
    approx = new_approximation(mode, target, caps)
    while approx.depth < caps.k_max:
        approx = extend_level(approx)
    return complete(approx)


def verify_B(approx: CantorApproximation, m: int, n_max: int | None = None) -> dict:
    """Re-derive every level-m certificate from scratch."""
    if not 1 <= m <= approx.depth:
        raise ValueError(f"level {m} outside 1..{approx.depth}")
    level = approx.level(m)
    reqs = _level_requirements(approx, m, n_max)
    failures = []
    by_arity: dict = {}
    for n, mm, phi in reqs:
        box = Box(tuple(level[i] for i in phi))
        enc = evaluate_interval(enumerate_poly(n, mm), box)
        by_arity[n] = by_arity.get(n, 0) + 1
        if enc.contains_zero():
            failures.append({"n": n, "m": mm, "phi": [i + 1 for i in phi], "enclosure": str(enc)})
    return {
        "level": m,
        "checked": len(reqs),
        "by_arity": by_arity,
        "polys": poly_window(m, m == approx.caps.k_max, approx.caps.poly_prefix),
        "failures": failures,
        "ok": not failures,
    }


def verify_all(approx: CantorApproximation, n_max: int | None = None) -> list:
    return [verify_B(approx, m, n_max) for m in range(1, approx.certified_depth + 1)]


def sample_points(approx: CantorApproximation, rule: str = "midpoint") -> list:
    """One rational per deepest-level interval."""
    if approx.depth < 1:
        raise ValueError("approximation has no levels")
    if rule == "midpoint":
        return [iv.midpoint for iv in approx.deepest()]
    if rule in ("left", "left-endpoint"):
        return [iv.lo for iv in approx.deepest()]
    raise ValueError(f"unknown sampling rule {rule!r}")


def independence_check(points, n_max: int, m_max: int, polys=None, ordered: bool = True) -> dict:
    """Exact brute-force search for annihilating polynomials.

    Evaluates ``enumerate_poly(n, m)`` for ``n <= n_max`` and ``m <= m_max``
    (or just the given ``polys``) at every ``n``-tuple of distinct points,
    exactly, without any interval reasoning.  Tuples are ordered by default;
    ``ordered=False`` takes each subset once, in the given point order.
    """
    from itertools import combinations

    pts = [as_fraction(x) for x in points]
    if len(set(pts)) != len(pts):
        raise ValueError("points must be distinct")
    if polys is None:
        jobs = [(n, m, enumerate_poly(n, m)) for n in range(1, n_max + 1) for m in range(1, m_max + 1)]
    else:
        jobs = [(p.n_vars, None, p) for p in polys]
    tuples = permutations if ordered else combinations
    zeros = []
    checked = 0
    for n, m, p in jobs:
        if n > len(pts):
            continue
        for tup in tuples(pts, n):
            checked += 1
            if evaluate(p, tup) == 0:
                zeros.append({"n": n, "m": m, "poly": str(p), "point": [format_rational(x) for x in tup]})
    return {"checked": checked, "zeros": zeros, "ok": not zeros}


# persistence -------------------------------------------------------------------


def _levels_json(levels) -> list:
    return [[iv.to_json() for iv in level] for level in levels]


def _levels_from_json(obj) -> list:
    return [[RationalInterval.from_json(iv) for iv in level] for level in obj]


def ledger_path_for(tree_path) -> Path:
    tree_path = Path(tree_path)
    return tree_path.with_name(tree_path.stem + ".ledger.jsonl")


def tree_to_json(approx: CantorApproximation, ledger_file: str | None) -> dict:
    obj = {
        "mode": approx.mode,
        "caps": approx.caps.to_json(),
        "certified_depth": approx.certified_depth,
        "levels": _levels_json(approx.levels),
        "ledger_file": ledger_file,
    }
    if approx.mode == "target" and approx.target is not None:
        obj["target"] = {"mode": approx.target.mode, "levels": _levels_json(approx.target.levels)}
    return obj


def write_tree(approx: CantorApproximation, path) -> Path:
    """Write the tree JSON and its JSON-lines ledger next to it."""
    path = Path(path)
    ledger = ledger_path_for(path)
    write_ledger(approx.ledger, ledger)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tree_to_json(approx, ledger.name), fh, indent=1)
        fh.write("\n")
    return ledger


def read_tree(path) -> CantorApproximation:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    caps_obj = obj.get("caps")
    levels = _levels_from_json(obj["levels"])
    caps = Caps(**caps_obj) if caps_obj else Caps(k_max=len(levels), n_max=1, budget=1, poly_prefix=0)
    ledger = []
    if obj.get("ledger_file"):
        ledger = read_ledger(path.parent / obj["ledger_file"])
    mode = obj["mode"]
    target = None
    if mode == "standard":
        target = standard_tree(max(caps.k_max, len(levels)))
    elif mode == "target" and "target" in obj:
        t = _levels_from_json(obj["target"]["levels"])
        target = CantorApproximation(
            mode=obj["target"].get("mode", "free"),
            levels=t,
            caps=Caps(k_max=len(t), n_max=1, budget=1, poly_prefix=0),
        )
    return CantorApproximation(
        mode=mode,
        levels=levels,
        caps=caps,
        ledger=ledger,
        target=target,
        certified_depth=int(obj.get("certified_depth", 0)),
    )


def default_budget() -> int:
    return int(os.environ.get("ALGCANTOR_BUDGET", DEFAULT_BUDGET))
