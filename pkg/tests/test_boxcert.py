import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algcantor.boxcert import (
    CERTIFIED,
    UNKNOWN,
    BudgetExhausted,
    Certificate,
    certify_nonvanishing,
    read_ledger,
    refine_to_avoid,
    search_avoiding_box,
    write_ledger,
)
from algcantor.interval import Box, RationalInterval
from algcantor.polyenum import IntPolynomial, evaluate

F = Fraction
unit = RationalInterval(0, 1)


def P(text, n=None):
    return IntPolynomial.parse(text, n_vars=n)


def test_certify_examples():
    box = Box.of(RationalInterval(0, F(1, 9)), RationalInterval(F(2, 9), F(1, 3)))
    assert certify_nonvanishing(P("X1 - X2"), box).verdict == CERTIFIED
    assert certify_nonvanishing(P("X1 - X2"), Box.of(unit, unit)).verdict == UNKNOWN
    cert = certify_nonvanishing(P("X1", 1), Box.of(RationalInterval(F(1, 3), F(2, 3))))
    assert cert.verdict == CERTIFIED
    assert cert.enclosure == RationalInterval(F(1, 3), F(2, 3))


def test_certified_verdict_needs_zero_free_enclosure():
    with pytest.raises(ValueError):
        Certificate((1, 1), Box.of(unit), RationalInterval(-1, 1), CERTIFIED)


def test_refine_diagonal_within_sixteen_nodes():
    box, nodes = search_avoiding_box(P("X1 - X2"), Box.of(unit, unit), 16)
    # iterative deepening: the shallowest certified box, leftmost first
    assert box == Box.of(RationalInterval(0, F(1, 4)), RationalInterval(F(1, 2), 1))
    assert nodes == 10


def test_refine_keeps_certified_box():
    box = Box.of(RationalInterval(F(1, 3), F(2, 3)))
    assert refine_to_avoid(P("X1", 1), box, 1) == box


def test_zero_at_left_endpoint_is_escaped():
    found = refine_to_avoid(P("X1", 1), Box.of(unit), 100)
    assert found == Box.of(RationalInterval(F(1, 2), 1))


def test_constant_rejected():
    with pytest.raises(ValueError):
        refine_to_avoid(IntPolynomial.from_dict(1, {}), Box.of(unit), 10)
    with pytest.raises(ValueError):
        refine_to_avoid(IntPolynomial.from_dict(1, {(0,): 3}), Box.of(unit), 10)


def test_budget_exhaustion():
    # X1 - 1/3 cannot be certified on a box straddling 1/3 with one node
    with pytest.raises(BudgetExhausted):
        refine_to_avoid(P("3*X1 - 1", 1), Box.of(unit), 1)


def test_core_is_respected():
    core = RationalInterval(F(1, 3), F(2, 3))
    box, _ = search_avoiding_box(P("2*X1 - 1", 1), Box.of(unit), 1000, core=[None])
    assert F(1, 2) not in box.factors[0]
    with pytest.raises(BudgetExhausted):
        # the zero 1/2 is inside the core, so no trimming can avoid it
        search_avoiding_box(P("2*X1 - 1", 1), Box.of(unit), 200, core=[core])
    found, _ = search_avoiding_box(P("4*X1 - 1", 1), Box.of(unit), 200, core=[core])
    f = found.factors[0]
    assert f.lo < core.lo and core.hi < f.hi


@st.composite
def refine_case(draw):
    n = draw(st.integers(1, 2))
    terms = draw(
        st.dictionaries(st.tuples(*[st.integers(0, 3)] * n), st.integers(-3, 3), min_size=1, max_size=4)
    )
    p = IntPolynomial.from_dict(n, terms)
    return p


@settings(max_examples=60, deadline=None)
@given(refine_case())
def test_refine_soundness(p):
    if p.is_constant():
        return
    box = Box(tuple([unit] * p.n_vars))
    try:
        found = refine_to_avoid(p, box, 500)
    except BudgetExhausted:
        return
    assert found.issubset(box) and found.volume > 0
    rng = random.Random(0)
    signs = set()
    for _ in range(100):
        pt = [f.lo + F(rng.randint(0, 1000), 1000) * f.width for f in found.factors]
        v = evaluate(p, pt)
        assert v != 0
        signs.add(v > 0)
    assert len(signs) == 1
    assert refine_to_avoid(p, box, 500) == found


def test_ledger_round_trip(tmp_path):
    certs = [
        certify_nonvanishing(P("X1 - X2"), Box.of(RationalInterval(0, F(1, 9)), RationalInterval(F(2, 9), F(1, 3))), (2, 7), level=2, injection=(1, 2)),
        certify_nonvanishing(P("X1", 1), Box.of(RationalInterval(F(1, 3), F(2, 3))), (1, 1)),
    ]
    path = tmp_path / "l.jsonl"
    write_ledger(certs, path)
    assert read_ledger(path) == certs
    assert len(path.read_text().splitlines()) == 2
