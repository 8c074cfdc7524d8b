"""Interval certificates that a polynomial has no zero on a box.

A certificate is an enclosure of ``p`` over the box computed by
:func:`algcantor.polyenum.evaluate_interval`; if 0 is outside the enclosure
the box misses the zero set of ``p``.  ``unknown`` only means the enclosure
was too coarse.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .interval import Box, RationalInterval, format_rational
from .polyenum import IntPolynomial, evaluate_interval

CERTIFIED = "certified"
UNKNOWN = "unknown"


class BudgetExhausted(RuntimeError):
    """The subdivision search ran out of nodes before finding a certified box."""

    def __init__(self, message, nodes=0, context=None):
        super().__init__(message)
        self.nodes = nodes
        self.context = context or {}


@dataclass(frozen=True)
class Certificate:
    poly_index: tuple  # (n, m): the polynomial is enumerate_poly(n, m)
    box: Box
    enclosure: RationalInterval
    verdict: str
    level: int | None = None
    injection: tuple | None = None  # 1-based interval indices at ``level``

    def __post_init__(self):
        if self.verdict == CERTIFIED and self.enclosure.contains_zero():
            raise ValueError("a certified verdict needs an enclosure without 0")

    def to_json(self) -> dict:
        obj = {
            "poly_index": list(self.poly_index),
            "box": self.box.to_json(),
            "enclosure": [format_rational(self.enclosure.lo), format_rational(self.enclosure.hi)],
            "verdict": self.verdict,
        }
        if self.level is not None:
            obj["level"] = self.level
        if self.injection is not None:
            obj["injection"] = list(self.injection)
        return obj

    @classmethod
    def from_json(cls, obj) -> "Certificate":
        return cls(
            poly_index=tuple(obj["poly_index"]),
            box=Box.from_json(obj["box"]),
            enclosure=RationalInterval.from_json(obj["enclosure"]),
            verdict=obj["verdict"],
            level=obj.get("level"),
            injection=tuple(obj["injection"]) if obj.get("injection") is not None else None,
        )


def certify_nonvanishing(p: IntPolynomial, box: Box, poly_index=(0, 0), **meta) -> Certificate:
    enclosure = evaluate_interval(p, box)
    verdict = UNKNOWN if enclosure.contains_zero() else CERTIFIED
    return Certificate(tuple(poly_index), box, enclosure, verdict, **meta)


def _trim(factor: RationalInterval, core: RationalInterval) -> RationalInterval:
    """Halve the slack on both sides of ``core`` inside ``factor``."""
    return RationalInterval((factor.lo + core.lo) / 2, (core.hi + factor.hi) / 2)


def _slack(factor: RationalInterval, core: RationalInterval | None):
    if core is None:
        return factor.width
    return (core.lo - factor.lo) + (factor.hi - core.hi)


def _check_core(box: Box, core):
    if core is None:
        return [None] * box.arity
    core = list(core)
    if len(core) != box.arity:
        raise ValueError("core must give one entry (or None) per factor")
    for f, c in zip(box.factors, core):
        if c is not None and not (f.lo < c.lo and c.hi < f.hi):
            raise ValueError(f"core {c} is not strictly inside factor {f}")
    return core


def _children(current: Box, core):
    slacks = [_slack(f, c) for f, c in zip(current.factors, core)]
    i = max(range(len(slacks)), key=lambda k: (slacks[k], -k))
    if slacks[i] == 0:
        return []
    if core[i] is None:
        left, right = current.factors[i].bisect()
        return [current.replace(i, left), current.replace(i, right)]
    return [current.replace(i, _trim(current.factors[i], core[i]))]


def search_avoiding_box(p: IntPolynomial, box: Box, budget: int, core=None):
    """Subdivision search; returns ``(box, nodes_used)``.

    Children come from the widest factor (first one on ties): a free factor
    is bisected, left half first; a factor with a core (a sub-interval that
    must stay strictly inside it) is instead trimmed halfway towards the core
    on both sides.  The tree is searched depth-first, left child first, under
    an increasing depth limit (iterative deepening), so the shallowest
    certified box wins and a zero at a left endpoint cannot trap the search on
    an infinite left spine.  Each distinct box costs one node when it is first
    evaluated; later passes reuse the verdict.
    """
    if p.is_constant():
        raise ValueError("constant polynomials are not enumerable and are rejected")
    if budget < 1:
        raise ValueError("budget must be positive")
    if box.volume <= 0:
        raise ValueError("box must have positive volume")
    core = _check_core(box, core)
    nodes = 0
    limit = 0
    straddles = set()  # boxes already evaluated in an earlier pass
    while True:
        stack = [(box, 0)]
        deeper = False
        while stack:
            current, depth = stack.pop()
            if current not in straddles:
                if nodes >= budget:
                    raise BudgetExhausted(
                        f"no certified sub-box of {box.to_json()} for {p} within {budget} nodes",
                        nodes=nodes,
                    )
                nodes += 1
                if not evaluate_interval(p, current).contains_zero():
                    return current, nodes
                straddles.add(current)
            if depth == limit:
                deeper = deeper or bool(_children(current, core))
                continue
            for child in reversed(_children(current, core)):
                stack.append((child, depth + 1))
        if not deeper:
            raise BudgetExhausted(f"search space for {p} exhausted after {nodes} nodes", nodes=nodes)
        limit += 1


def refine_to_avoid(p: IntPolynomial, box: Box, budget: int, core=None) -> Box:
    """A positive-volume sub-box on which ``p`` is certified nonvanishing.

    Raises :class:`BudgetExhausted` if ``budget`` nodes do not suffice; that
    can mean the zero set crosses every explored box or that the budget is
    too small, and only a larger budget tells the two apart.
    """
    found, _ = search_avoiding_box(p, box, budget, core)
    return found


def write_ledger(certificates: Iterable[Certificate], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for cert in certificates:
            fh.write(json.dumps(cert.to_json(), separators=(",", ":")) + "\n")


def read_ledger(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return [Certificate.from_json(json.loads(line)) for line in fh if line.strip()]
