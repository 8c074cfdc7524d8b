"""``algcantor`` command line.

Exit codes: 0 success, 1 verification or I/O failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import builder, closuregreedy, fields, homeo, ternary, vonneumann
from .boxcert import BudgetExhausted
from .interval import as_fraction, format_rational
from .polyenum import IntPolynomial


class UsageError(Exception):
    pass


def _emit(obj, out=None):
    text = json.dumps(obj, indent=1, sort_keys=True, default=_json_default) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json_default(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _rationals(text: str) -> list:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _print_seed(seed):
    print(f"seed: {seed}", file=sys.stderr)


# build / verify ------------------------------------------------------------------


def _load_tree_arg(source: str):
    """A tree file, or ``standard:K`` for the middle-thirds tree of depth K."""
    if source.startswith("standard:"):
        try:
            depth = int(source.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad tree source {source!r}") from None
        if depth < 1:
            raise UsageError("standard depth must be positive")
        return builder.standard_tree(depth)
    return builder.read_tree(source)


def cmd_build(args):
    caps = builder.Caps(
        k_max=args.depth,
        n_max=args.nmax,
        budget=args.budget if args.budget is not None else builder.default_budget(),
        poly_prefix=args.prefix,
    )
    target = None
    if args.mode == "target":
        if not args.target:
            raise UsageError("--mode target needs --target")
        target = _load_tree_arg(args.target)
    elif args.target:
        raise UsageError("--target is only valid with --mode target")
    try:
        approx = builder.build(args.mode, caps, target)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ledger = builder.write_tree(approx, args.out)
    print(f"wrote {args.out} ({approx.depth} levels) and {ledger} ({len(approx.ledger)} certificates)")
    return 0


def _replay_ledger(approx) -> list:
    """Ledger entries whose box or enclosure no longer matches the tree."""
    from .boxcert import certify_nonvanishing
    from .interval import Box
    from .polyenum import enumerate_poly

    bad = []
    for i, cert in enumerate(approx.ledger):
        level = approx.level(cert.level)
        box = Box(tuple(level[j - 1] for j in cert.injection))
        fresh = certify_nonvanishing(enumerate_poly(*cert.poly_index), box, cert.poly_index)
        if box != cert.box or fresh.enclosure != cert.enclosure or fresh.verdict != cert.verdict:
            bad.append(i + 1)
    return bad


def cmd_verify(args):
    approx = builder.read_tree(args.tree)
    problems = builder.check_invariants(approx)
    levels = [args.m] if args.m else list(range(1, approx.certified_depth + 1))
    if any(not 1 <= m <= approx.depth for m in levels):
        raise UsageError(f"--m must lie in 1..{approx.depth}")
    reports = [builder.verify_B(approx, m, args.nmax) for m in levels]
    bad_ledger = _replay_ledger(approx)
    ok = not problems and all(r["ok"] for r in reports) and not bad_ledger
    _emit(
        {
            "tree": str(args.tree),
            "invariant_violations": problems,
            "levels": reports,
            "ledger_entries": len(approx.ledger),
            "ledger_mismatches": bad_ledger,
            "ok": ok,
        },
        args.out,
    )
    return 0 if ok else 1


def cmd_independence(args):
    if args.tree:
        points = builder.sample_points(builder.read_tree(args.tree), args.sample)
    elif args.points:
        points = args.points
    else:
        raise UsageError("give --tree or --points")
    polys = [IntPolynomial.parse(p) for p in args.poly] if args.poly else None
    report = builder.independence_check(
        points, args.nmax, args.mmax, polys=polys, ordered=not args.unordered
    )
    report["points"] = [format_rational(x) for x in points]
    _emit(report, args.out)
    return 0 if report["ok"] else 1


# ternary / sigma -------------------------------------------------------------------


def cmd_ternary(args):
    if args.action == "member":
        _emit({"x": format_rational(args.x), "k": args.k, "member": ternary.in_standard_truncation(args.x, args.k)}, args.out)
        return 0
    if args.action == "level":
        _emit({"k": args.k, "intervals": [iv.to_json() for iv in ternary.standard_level(args.k)]}, args.out)
        return 0
    if args.action == "decompose":
        d1, d2 = ternary.sum_decompose(args.y, args.depth, approximate=args.approximate)
        total = d1.exact_value() + d2.exact_value()
        _emit(
            {
                "y": format_rational(args.y),
                "first": d1.to_json(),
                "second": d2.to_json(),
                "sum": format_rational(total),
                "exact": total == args.y,
            },
            args.out,
        )
        return 0
    if args.action == "partition":
        return _partition_report(args)
    if args.action == "cell":
        _emit(vonneumann.irrational_cell_report(args.test_depth), args.out)
        return 0
    raise UsageError(f"unknown ternary action {args.action!r}")  # pragma: no cover


def partition_report(depth: int) -> dict:
    cells = [ternary.partition_cell(x, depth) for x in ternary.even_patterns(depth)]
    flat = sorted(iv for cell in cells for iv in cell)
    level = ternary.standard_level(2 * depth)
    disjoint = all(a.hi < b.lo for a, b in zip(flat, flat[1:]))
    return {
        "depth": depth,
        "cells": len(cells),
        "intervals_per_cell": [len(c) for c in cells],
        "pairwise_disjoint": disjoint,
        "covers_standard_level": flat == level,
    }


def _partition_report(args):
    report = partition_report(args.depth)
    _emit(report, args.out)
    return 0 if report["pairwise_disjoint"] and report["covers_standard_level"] else 1


def cmd_sigma(args):
    values = [vonneumann.sigma_digits(x, args.terms).to_json() for x in args.x]
    obj = {"sigma": values}
    if len(args.x) > 1:
        probe = vonneumann.injectivity_probe(args.x, args.terms)
        obj["distinct"] = probe["distinct"]
    _emit(obj, args.out)
    return 0


# homeo / greedy / fields / export ---------------------------------------------------


def cmd_homeo(args):
    src, dst = _load_tree_arg(args.source), _load_tree_arg(args.dest)
    if src.depth != dst.depth:
        raise UsageError(f"trees have different depths ({src.depth} vs {dst.depth})")
    f = homeo.tree_homeomorphism(src, dst)
    _emit(f.to_json(), args.out)
    return 0


def cmd_greedy(args):
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            obj = json.load(fh)
        try:
            sys_, fam = closuregreedy.load_instance(obj)
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None
        report = closuregreedy.run_instance(sys_, fam)
        report["audit"] = closuregreedy.audit_closure(sys_, args.audit, seed=args.seed)
        _print_seed(args.seed)
        _emit(report, args.out)
        return 0 if report["ok"] and report["audit"]["ok"] else 1
    if not args.random:
        raise UsageError("give --input FILE or --random COUNT")
    _print_seed(args.seed)
    rng = random.Random(args.seed)
    runs = []
    for _ in range(args.random):
        dim, sys_, fam = closuregreedy.random_instance(rng, tuple(args.dims), tuple(args.sizes))
        res = closuregreedy.run_instance(sys_, fam)
        runs.append({"dim": dim, "members": len(fam), **res})
    _emit({"seed": args.seed, "runs": runs}, args.out)
    return 0


def cmd_fields(args):
    if args.action == "eisenstein":
        p = IntPolynomial.parse(args.poly, n_vars=1)
        _emit({"poly": str(p), "prime": args.prime, "ok": fields.eisenstein_check(p, args.prime)}, args.out)
        return 0
    if args.action == "tower":
        bound, contains = fields.sqrt_tower_degree(args.n)
        _emit({"adjunctions": args.n, "degree_bound": bound, "contains_cbrt2": contains}, args.out)
        return 0
    if args.action == "certificates":
        S, T = args.S.split(",") if args.S else [], args.T.split(",")
        subs = fields.subsets(T)
        out = []
        for u, v in itertools.product(subs, repeat=2):
            cert = fields.distinctness_certificate(fields.g_map(S, T, u), fields.g_map(S, T, v))
            out.append({
                "V": sorted(u, key=fields.symbol_key),
                "W": sorted(v, key=fields.symbol_key),
                "result": cert.to_json(),
            })
        _emit({"S": S, "T": T, "pairs": out}, args.out)
        return 0
    if args.action == "inverses":
        _print_seed(args.seed)
        rng = random.Random(args.seed)
        gens = args.gens.split(",")
        ok = 0
        for _ in range(args.count):
            e = fields.random_theta_element(gens, rng)
            ok += e * e.inverse() == 1
        _emit({"seed": args.seed, "count": args.count, "verified": ok}, args.out)
        return 0 if ok == args.count else 1
    raise UsageError(f"unknown fields action {args.action!r}")  # pragma: no cover


def cmd_export(args):
    approx = _load_tree_arg(args.tree)
    rows = []
    if args.what == "intervals":
        header = ["level", "index", "lo", "hi", "lo_float", "hi_float"]
        for k, level in enumerate(approx.levels, start=1):
            for j, iv in enumerate(level, start=1):
                rows.append([k, j, format_rational(iv.lo), format_rational(iv.hi), float(iv.lo), float(iv.hi)])
    else:
        header = ["index", "lo", "hi", "lo_float", "hi_float"]
        for j, (lo, hi) in enumerate(homeo.gaps_of(approx).gaps, start=1):
            rows.append([j, format_rational(lo), format_rational(hi), float(lo), float(hi)])
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


# parser ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="algcantor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build and certify an interval tree")
    b.add_argument("--depth", type=_positive, required=True)
    b.add_argument("--nmax", type=_positive, default=2)
    b.add_argument("--budget", type=_positive, default=None, help="node budget (default: $ALGCANTOR_BUDGET or 100000)")
    b.add_argument("--mode", choices=builder.MODES, default="standard")
    b.add_argument("--target", help="target tree file or standard:K (target mode)")
    b.add_argument("--prefix", type=int, default=builder.DEFAULT_PREFIX, help="polynomials certified at the final level")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="replay the certificates of a tree")
    v.add_argument("--tree", required=True)
    v.add_argument("--m", type=_positive, default=None, help="level to check (default: all)")
    v.add_argument("--nmax", type=_positive, default=None)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("independence", help="exact search for annihilating polynomials")
    i.add_argument("--tree")
    i.add_argument("--points", type=_rationals, help="comma-separated rationals")
    i.add_argument("--sample", choices=["midpoint", "left"], default="midpoint")
    i.add_argument("--nmax", type=_positive, default=2)
    i.add_argument("--mmax", type=_positive, default=50)
    i.add_argument("--poly", action="append", help="check only these polynomials (repeatable)")
    i.add_argument("--unordered", action="store_true", help="each subset once instead of every ordered tuple")
    i.add_argument("--out")
    i.set_defaults(func=cmd_independence)

    t = sub.add_parser("ternary", help="ternary-set utilities")
    tsub = t.add_subparsers(dest="action", required=True)
    tm = tsub.add_parser("member")
    tm.add_argument("--x", type=_rational, required=True)
    tm.add_argument("--k", type=_positive, required=True)
    tl = tsub.add_parser("level")
    tl.add_argument("--k", type=_positive, required=True)
    td = tsub.add_parser("decompose")
    td.add_argument("--y", type=_rational, required=True)
    td.add_argument("--depth", type=_positive, required=True)
    td.add_argument("--approximate", action="store_true")
    tp = tsub.add_parser("partition")
    tp.add_argument("--depth", type=_positive, required=True)
    tc = tsub.add_parser("cell")
    tc.add_argument("--test-depth", type=_positive, default=64)
    for sp in (tm, tl, td, tp, tc):
        sp.add_argument("--out")
    t.set_defaults(func=cmd_ternary)

    s = sub.add_parser("sigma", help="sparse digits of the von Neumann map")
    s.add_argument("--x", type=_rational, action="append", required=True, help="repeatable")
    s.add_argument("--terms", type=_positive, default=3)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sigma)

    h = sub.add_parser("homeo", help="increasing PL bijection between two trees")
    h.add_argument("--from", dest="source", required=True)
    h.add_argument("--to", dest="dest", required=True)
    h.add_argument("--out")
    h.set_defaults(func=cmd_homeo)

    g = sub.add_parser("greedy", help="greedy disjoint pair over a closure system")
    g.add_argument("--input")
    g.add_argument("--random", type=_positive, help="number of random span instances")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dims", type=_positive, nargs=2, default=[4, 10])
    g.add_argument("--sizes", type=_positive, nargs=2, default=[2, 20])
    g.add_argument("--audit", type=_positive, default=50, help="closure-axiom samples")
    g.add_argument("--out")
    g.set_defaults(func=cmd_greedy)

    f = sub.add_parser("fields", help="cubic-extension arithmetic and certificates")
    fsub = f.add_subparsers(dest="action", required=True)
    fe = fsub.add_parser("eisenstein")
    fe.add_argument("--poly", default="X1^3 - 2")
    fe.add_argument("--prime", type=int, default=2)
    ft = fsub.add_parser("tower")
    ft.add_argument("--n", type=int, required=True)
    fc = fsub.add_parser("certificates")
    fc.add_argument("--S", default="t1")
    fc.add_argument("--T", default="t2,t3,t4")
    fi = fsub.add_parser("inverses")
    fi.add_argument("--count", type=_positive, default=100)
    fi.add_argument("--seed", type=int, default=0)
    fi.add_argument("--gens", default="t1,t2")
    for sp in (fe, ft, fc, fi):
        sp.add_argument("--out")
    f.set_defaults(func=cmd_fields)

    e = sub.add_parser("export", help="CSV coordinate tables for plotting")
    e.add_argument("--tree", required=True, help="tree file or standard:K")
    e.add_argument("--what", choices=["intervals", "gaps"], default="intervals")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
