import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pds_atlas.permcore import (
    CycleType, Permutation, act_on_row, all_permutations, compose, conjugate, cycle_type,
    format_cycles, format_tuple, inverse, matrix_of, parse_cycles, parse_tuple,
)


def P(text, n=None):
    return parse_cycles(text, n)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 6), (4, 24), (5, 120)])
def test_all_permutations_count_and_order(n, count):
    perms = all_permutations(n)
    assert len(perms) == len(set(perms)) == count
    assert perms == sorted(perms)
    assert perms[0] == Permutation.identity(n)


@pytest.mark.parametrize("n", [0, 7, -1])
def test_all_permutations_range(n):
    with pytest.raises(ValueError):
        all_permutations(n)


def test_compose_examples():
    p = P("(1)(23)", 3)
    assert compose(Permutation.identity(3), p) == p
    assert compose(P("(12)", 2), P("(12)", 2)) == Permutation.identity(2)
    assert compose(P("(123)"), P("(123)")) == P("(132)")
    with pytest.raises(ValueError):
        compose(P("(12)", 2), P("(123)"))


def test_compose_definition():
    p, q = P("(1234)"), P("(12)", 4)
    r = compose(p, q)
    assert all(r[i] == p[q[i]] for i in range(4))


def test_cycle_type_examples():
    assert str(cycle_type(Permutation.identity(4))) == "(1)+(1)+(1)+(1)"
    assert str(cycle_type(P("(12)(34)"))) == "(2)+(2)"
    assert str(cycle_type(P("(234)", 4))) == "(3)+(1)"
    assert CycleType([1, 3]) == (3, 1)


def test_act_on_row_examples():
    c = ("c1", "c2", "c3")
    assert act_on_row(c, Permutation.identity(3)) == c
    assert act_on_row(c, P("(132)")) == ("c2", "c3", "c1")
    assert act_on_row((1, 2, 3, 4), P("(34)", 4)) == (1, 2, 4, 3)
    with pytest.raises(ValueError):
        act_on_row((1, 2), P("(123)"))


def test_matrix_of_examples():
    assert (matrix_of(Permutation.identity(4)) == np.eye(4, dtype=int)).all()
    assert matrix_of(P("(12)")).tolist() == [[0, 1], [1, 0]]
    ev = np.linalg.eigvals(matrix_of(P("(1234)")).astype(float))
    roots = np.array([1, 1j, -1, -1j])
    assert max(min(abs(e - r) for r in roots) for e in ev) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_matrix_product_exhaustive(n):
    # with P[i][p(i)] = 1, the product P_p · P_q is the matrix of "p then q", i.e. q∘p
    for p, q in itertools.product(all_permutations(n), repeat=2):
        assert (matrix_of(p) @ matrix_of(q) == matrix_of(compose(q, p))).all()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_act_on_row_composes_exhaustive(n):
    c = tuple(f"s{i}" for i in range(n))
    for p, q in itertools.product(all_permutations(n), repeat=2):
        assert act_on_row(act_on_row(c, p), q) == act_on_row(c, compose(q, p))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_act_on_row_is_row_times_matrix(n):
    c = np.arange(1, n + 1)
    for p in all_permutations(n):
        assert tuple(c @ matrix_of(p)) == act_on_row(tuple(c), p)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cycle_type_conjugation_invariant_exhaustive(n):
    for p, x in itertools.product(all_permutations(n), repeat=2):
        assert cycle_type(conjugate(p, x)) == cycle_type(p)


def test_inverse_identity():
    for p in all_permutations(4):
        assert compose(p, inverse(p)) == Permutation.identity(4)
        assert p.inverse() == inverse(p)


def test_cycle_notation_roundtrip():
    for p in all_permutations(4):
        assert parse_cycles(format_cycles(p)) == p
    assert format_cycles(P("(34)", 4)) == "(1)(2)(34)"
    assert P("I4") == Permutation.identity(4)
    assert P("I", 3) == Permutation.identity(3)


@pytest.mark.parametrize("bad", ["(12", "(11)", "12", "()", "(1)(1)"])
def test_parse_cycles_rejects(bad):
    with pytest.raises(ValueError):
        parse_cycles(bad)


def test_parse_cycles_label_exceeds_order():
    with pytest.raises(ValueError):
        parse_cycles("(15)", 4)


def test_parse_tuple_defaults_order_to_largest_label():
    t = parse_tuple("((34),(24),(142))")
    assert all(p.n == 4 for p in t)
    assert format_tuple(t) == "((1)(2)(34),(1)(24)(3),(142)(3))"
    assert parse_tuple("((12))") == (P("(12)"),)
    assert parse_tuple("(I4,(34),(34))")[0] == Permutation.identity(4)
    with pytest.raises(ValueError):
        parse_tuple("((12),x)")


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


perm4 = st.permutations(list(range(4))).map(Permutation)


@given(perm4, perm4, perm4)
def test_compose_associative(p, q, r):
    assert compose(compose(p, q), r) == compose(p, compose(q, r))


@given(perm4, st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_act_on_row_is_rearrangement(p, c):
    assert sorted(act_on_row(c, p)) == sorted(c)
