import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from algcantor.closuregreedy import (
    ClosureSystem,
    FamilyMemberExhausted,
    TargetFamily,
    audit_closure,
    gf2_rank,
    greedy_pair_build,
    independence_witness,
    instance_to_json,
    load_instance,
    random_instance,
    run_instance,
)


def test_span_closure_matches_exhaustive_oracle():
    sys = ClosureSystem.span(4)
    rng = random.Random(3)
    for _ in range(50):
        xs = rng.sample(range(1, 16), rng.randint(0, 4))
        assert sys.closure(xs) == oracles.gf2_span(xs) - {0}


def test_two_spanning_members_in_dimension_four():
    sys = ClosureSystem.span(4)
    everything = range(1, 16)
    a, b = greedy_pair_build(sys, TargetFamily([everything, everything]))
    # least-identifier choice: 1, then 2; then 4, then 8
    assert (a, b) == ([1, 4], [2, 8])
    assert independence_witness(sys, a + b)["independent"]
    assert len(oracles.gf2_span(a + b)) == 16


def test_exhausted_member():
    sys = ClosureSystem.span(3)
    with pytest.raises(FamilyMemberExhausted) as info:
        greedy_pair_build(sys, TargetFamily([[1, 2, 3], [1, 2, 3]]))
    # {1, 2} span {1, 2, 3}: the second member has nothing left
    assert (info.value.index, info.value.step) == (2, "x")
    ident = ClosureSystem.named("identity", [1, 2])
    with pytest.raises(FamilyMemberExhausted) as info:
        greedy_pair_build(ident, TargetFamily([[1]]))
    assert (info.value.index, info.value.step) == (1, "y")


def test_empty_family():
    assert greedy_pair_build(ClosureSystem.span(3), TargetFamily([])) == ([], [])


def test_empty_member_rejected():
    with pytest.raises(ValueError):
        TargetFamily([[1], []])


def test_audit():
    assert audit_closure(ClosureSystem.span(5), 100)["ok"]
    assert audit_closure(ClosureSystem.named("identity", range(10)), 100)["ok"]
    report = audit_closure(ClosureSystem.named("complement", range(1, 10)), 100)
    assert not report["ok"] and report["violations"]["extensive"] > 0


def test_independence_witness():
    sys = ClosureSystem.span(3)
    r = independence_witness(sys, [1, 2, 3])
    assert not r["independent"] and r["witness"] == 3
    assert independence_witness(sys, [5, 5])["independent"]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_feasible_random_instances_succeed(seed):
    rng = random.Random(seed)
    dim = rng.randint(4, 10)
    _, sys, fam = random_instance(rng, dims=(dim, dim), sizes=(2, max(2, dim // 2)))
    a, b = greedy_pair_build(sys, fam)
    assert not set(a) & set(b)
    assert len(set(a)) == len(a) and len(set(b)) == len(b)
    assert all(m & set(a) and m & set(b) for m in fam.members)
    assert gf2_rank(a + b) == len(a) + len(b)
    assert greedy_pair_build(sys, fam) == (a, b)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_exhaustion_only_when_picks_span(seed):
    rng = random.Random(seed)
    dim, sys, fam = random_instance(rng)
    res = run_instance(sys, fam)
    if res["ok"]:
        assert 2 * len(fam) <= dim
    else:
        ex = res["exhausted"]
        # spanning members run out exactly once all dim directions are used
        picks = 2 * (ex["index"] - 1) + (ex["step"] == "y")
        assert picks == dim


def test_json_instance_round_trip():
    obj = {"universe": [1, 2, 3, 4, 5, 6, 7], "closure": "span-gf2", "family": [[1, 2, 4], [3, 5, 6, 7]]}
    sys, fam = load_instance(obj)
    assert instance_to_json(sys, fam) == obj
    with pytest.raises(ValueError):
        load_instance({"universe": [1], "closure": "nope", "family": []})
