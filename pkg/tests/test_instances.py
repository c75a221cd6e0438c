import itertools
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxkxor.instances import (
    GenerationError,
    InstanceFormatError,
    XorInstance,
    brute_force_optimum,
    check_triangle_free,
    evaluate_fraction,
    generate_regular,
    generate_regular_triangle_free,
    optimal_assignments,
    read_instance,
    write_instance,
)

DATA = Path(__file__).parent / "data"


def naive_triangle_free(inst):
    """Independent checker: explicit neighbourhoods, all clause pairs."""
    nbrs = {v: set() for v in range(inst.n)}
    for vars_, _ in inst.clauses:
        for v in vars_:
            nbrs[v].update(set(vars_) - {v})
    for (a, _), (b, _) in itertools.combinations(inst.clauses, 2):
        if len(set(a) & set(b)) > 1:
            return False
    for vars_, _ in inst.clauses:
        for u, v in itertools.combinations(vars_, 2):
            if (nbrs[u] & nbrs[v]) - set(vars_):
                return False
    return True


def naive_best(inst):
    best, arg = -1, None
    for x in itertools.product((-1, 1), repeat=inst.n):
        sat = sum(np.prod([x[v] for v in vars_]) == s for vars_, s in inst.clauses)
        if sat > best:
            best, arg = sat, x
    return Fraction(best, inst.m), arg


def test_eight_cycle_generation():
    for seed in range(10):
        inst = generate_regular_triangle_free(2, 2, 8, seed=seed)
        assert inst.m == 8 and inst.is_regular()
        assert check_triangle_free(inst) and naive_triangle_free(inst)


def test_disjoint_clauses():
    inst = generate_regular_triangle_free(3, 1, 9, seed=0)
    assert inst.m == 3
    assert sorted(v for c, _ in inst.clauses for v in c) == list(range(9))
    assert check_triangle_free(inst)


def test_seeded_k3_instance_independent_check():
    inst = generate_regular_triangle_free(3, 2, 30, seed=7)
    assert np.all(inst.degrees() == 2)
    assert naive_triangle_free(inst)


def test_generation_deterministic():
    a = generate_regular_triangle_free(3, 3, 60, seed=11)
    b = generate_regular_triangle_free(3, 3, 60, seed=11)
    c = generate_regular_triangle_free(3, 3, 60, seed=12)
    assert a == b and a != c


def test_generation_errors():
    with pytest.raises(ValueError, match="divisible"):
        generate_regular_triangle_free(3, 2, 31, seed=0)
    with pytest.raises(GenerationError, match="budget of 50"):
        generate_regular_triangle_free(3, 3, 9, seed=0, max_attempts=50)


def test_generate_without_triangle_constraint():
    inst = generate_regular(3, 3, 12, seed=1, triangle_free=False)
    assert inst.is_regular() and inst.m == 12


def test_triangle_free_examples():
    assert check_triangle_free(XorInstance(3, 6, (((0, 1, 2), 1), ((3, 4, 5), -1))))
    assert not check_triangle_free(XorInstance(3, 4, (((0, 1, 2), 1), ((0, 1, 3), 1))))
    assert not check_triangle_free(XorInstance(2, 3, (((0, 1), -1), ((1, 2), -1), ((0, 2), -1))))
    # a 4-cycle has no triangle
    assert check_triangle_free(XorInstance(2, 4, (((0, 1), 1), ((1, 2), 1), ((2, 3), 1), ((0, 3), 1))))


def test_brute_force_examples():
    assert brute_force_optimum(XorInstance(3, 3, (((0, 1, 2), -1),)))[0] == 1
    k3 = XorInstance(2, 3, (((0, 1), -1), ((1, 2), -1), ((0, 2), -1)))
    assert brute_force_optimum(k3)[0] == Fraction(2, 3)


def test_brute_force_cap():
    inst = generate_regular_triangle_free(2, 2, 26, seed=0)
    with pytest.raises(ValueError, match="cap"):
        brute_force_optimum(inst)


def test_golden_fixture():
    inst = read_instance(DATA / "k3_d2_n15.json")
    assert (inst.k, inst.n, inst.m) == (3, 15, 10)
    best, x = brute_force_optimum(inst)
    assert best == Fraction(9, 10)
    assert x.tolist() == [-1, -1, -1, -1, -1, -1, -1, -1, 1, -1, -1, 1, -1, 1, 1]
    naive, first = naive_best(inst)
    assert naive == best and list(first) == x.tolist()
    assert len(optimal_assignments(inst)[1]) == 640


def test_evaluate_fraction_examples():
    plus = XorInstance(3, 3, (((0, 1, 2), 1),))
    minus = XorInstance(3, 3, (((0, 1, 2), -1),))
    assert evaluate_fraction(plus, [1, 1, 1]) == 1
    assert evaluate_fraction(minus, [1, 1, 1]) == 0
    k3 = XorInstance(2, 3, (((0, 1), -1), ((1, 2), -1), ((0, 2), -1)))
    assert evaluate_fraction(k3, [1, 1, -1]) == Fraction(2, 3)
    with pytest.raises(ValueError):
        evaluate_fraction(k3, [1, 1])


def test_invariants_rejected():
    with pytest.raises(ValueError):
        XorInstance(3, 4, (((0, 1), 1),))
    with pytest.raises(ValueError):
        XorInstance(3, 4, (((0, 1, 4), 1),))
    with pytest.raises(ValueError):
        XorInstance(3, 4, (((0, 1, 2), 1), ((0, 1, 2), 1)))
    with pytest.raises(ValueError):
        XorInstance(3, 4, (((0, 1, 2), 2),))
    flagged = XorInstance(3, 4, (((0, 1, 2), 1), ((0, 1, 2), -1)))
    assert flagged.contradictory_pairs()


def test_round_trip(tmp_path):
    inst = generate_regular_triangle_free(3, 2, 30, seed=7)
    path = tmp_path / "inst.json"
    write_instance(inst, path)
    assert read_instance(path) == inst
    data = json.loads(path.read_text())
    assert [c["vars"] for c in data["clauses"]] == sorted(c["vars"] for c in data["clauses"])


def test_malformed_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"k": 3, "n": 5, "clauses": [{"vars": [0, 1], "sign": 1}]}))
    with pytest.raises(InstanceFormatError, match="clause 0"):
        read_instance(path)
    path.write_text("{not json")
    with pytest.raises(InstanceFormatError, match="line 1"):
        read_instance(path)


small_instances = st.integers(2, 4).flatmap(
    lambda k: st.tuples(
        st.just(k),
        st.lists(
            st.tuples(st.sets(st.integers(0, 7), min_size=k, max_size=k), st.sampled_from((-1, 1))),
            min_size=1,
            max_size=8,
        ),
    )
)


def _build(k, raw):
    seen, clauses = set(), []
    for vars_, s in raw:
        key = (tuple(sorted(vars_)), s)
        if key not in seen:
            seen.add(key)
            clauses.append(key)
    return XorInstance(k, 8, tuple(clauses))


@settings(max_examples=60, deadline=None)
@given(small_instances, st.lists(st.sampled_from((-1, 1)), min_size=8, max_size=8))
def test_optimum_dominates_samples(data, x):
    inst = _build(*data)
    assert brute_force_optimum(inst)[0] >= evaluate_fraction(inst, x)


@settings(max_examples=60, deadline=None)
@given(small_instances, st.lists(st.sampled_from((-1, 1)), min_size=8, max_size=8))
def test_sign_flip_complements(data, x):
    inst = _build(*data)
    assert evaluate_fraction(inst.flip_all_signs(), x) == 1 - evaluate_fraction(inst, x)


@settings(max_examples=40, deadline=None)
@given(small_instances)
def test_serialization_identity(data):
    inst = _build(*data)
    assert XorInstance.from_dict(json.loads(json.dumps(inst.to_dict()))) == inst
