import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from algcantor.builder import Caps, CantorApproximation, standard_tree
from algcantor.homeo import (
    GapFamily,
    PiecewiseLinearMap,
    gaps_of,
    increasing_bijection,
    is_increasing_algebraic,
    order_isomorphism,
    tree_homeomorphism,
)
from algcantor.interval import RationalInterval

F = Fraction


def test_gaps_of_standard():
    assert gaps_of(standard_tree(1)).gaps == ((F(1, 3), F(2, 3)),)
    assert gaps_of(standard_tree(2)).gaps == (
        (F(1, 9), F(2, 9)),
        (F(1, 3), F(2, 3)),
        (F(7, 9), F(8, 9)),
    )
    for k in range(1, 7):
        assert len(gaps_of(standard_tree(k))) == 2**k - 1


def test_order_isomorphism(free4):
    g = gaps_of(standard_tree(2))
    assert order_isomorphism(g, g) == [(0, 0), (1, 1), (2, 2)]
    with pytest.raises(ValueError):
        order_isomorphism(g, gaps_of(standard_tree(3)))


def test_pairing_against_free_depth_one(free3):
    one = CantorApproximation("free", free3.levels[:1], Caps(k_max=1))
    g0, g1 = gaps_of(standard_tree(1)), gaps_of(one)
    assert order_isomorphism(g0, g1) == [(0, 0)]
    assert g1.gaps == ((free3.level(1)[0].hi, free3.level(1)[1].lo),)


def test_identity_and_explicit_map():
    s1 = standard_tree(1)
    f = tree_homeomorphism(s1, s1)
    assert all(f(x) == x for x in [F(-3), 0, F(1, 5), F(1, 2), 1, F(7, 2)])
    tgt = CantorApproximation("free", [[RationalInterval(0, F(1, 9)), RationalInterval(F(8, 9), 1)]], Caps(k_max=1))
    f = tree_homeomorphism(s1, tgt)
    assert [f(x) for x in (0, F(1, 3), F(2, 3), 1)] == [0, F(1, 9), F(8, 9), 1]
    assert f(F(1, 6)) == F(1, 18) and f(F(1, 2)) == F(1, 2)
    # unit slope outside the bounds
    assert f(-2) == -2 and f(3) == 3


def test_round_trip_and_transport(free4):
    src = standard_tree(4)
    f = tree_homeomorphism(src, free4)
    for a, b in zip(src.deepest(), free4.deepest()):
        assert f(a.lo) == b.lo and f(a.hi) == b.hi
    rng = random.Random(1)
    for _ in range(100):
        x = F(rng.randint(-2000, 3000), rng.randint(1, 1000))
        assert f.inverse(f(x)) == x
        assert f(f.inverse(x)) == x


def test_invalid_pairing():
    g = gaps_of(standard_tree(2))
    with pytest.raises(ValueError):
        increasing_bijection([(0, 1), (1, 0), (2, 2)], g, g)


def test_breakpoints_must_increase():
    with pytest.raises(ValueError):
        PiecewiseLinearMap(((0, 0), (1, 0)))
    with pytest.raises(ValueError):
        GapFamily((0, 1), ((F(1, 2), F(3, 4)), (F(1, 4), F(1, 3))))


def test_is_increasing_algebraic():
    f = tree_homeomorphism(standard_tree(2), standard_tree(2))
    assert is_increasing_algebraic(f, [(0, 1), (F(1, 3), F(1, 9)), (5, 5)])
    assert not is_increasing_algebraic(lambda x: -x, [(0, 1)])


def test_json_round_trip(free3):
    f = tree_homeomorphism(standard_tree(3), free3)
    obj = f.to_json()
    assert all(isinstance(x, str) and "/" in x for pair in obj["breakpoints"] for x in pair)
    assert PiecewiseLinearMap.from_json(obj) == f


fr = st.fractions(min_value=-3, max_value=4, max_denominator=500)


@given(fr, fr)
def test_strictly_increasing_random(u, v):
    f = tree_homeomorphism(standard_tree(3), standard_tree(3))
    g = f.inverted()
    if u < v:
        assert f(u) < f(v) and g(u) < g(v)
