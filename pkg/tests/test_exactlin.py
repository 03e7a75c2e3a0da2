# tests/test_exactlin.py
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coalition_forge.core import DimensionMismatch
from coalition_forge.exactlin import RationalMatrix, SolveStatus, is_invertible, null_space, rank, solve

EX2 = RationalMatrix.from_rows([[1, 1, 0], [1, 1, 1], [0, 1, 1]])
EX3 = RationalMatrix.from_rows([[1, 0, 1], [0, 1, 1], [1, 1, 1]])
ONES = RationalMatrix.from_rows([[1, 1], [1, 1]])


def test_rank():
    assert rank(EX2) == 3
    assert rank(ONES) == 1
    for n in range(5):
        assert rank(RationalMatrix.identity(n)) == n


def test_solve_example_systems():
    r = solve(EX2, [-18, -22, -16])
    assert r.status is SolveStatus.UNIQUE
    assert r.solution == (-6, -12, -4)
    r = solve(EX3, [-1, -2, -4])
    assert r.solution == (-2, -3, 1)


def test_solve_inconsistent_and_underdetermined():
    r = solve(ONES, [1, 2])
    assert r.status is SolveStatus.NONE and r.solution is None
    r = solve(ONES, [1, 1])
    assert r.status is SolveStatus.INFINITE
    assert r.nullity == 1
    assert ONES.apply(r.solution) == (1, 1)


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve(EX2, [1, 2])


def test_is_invertible():
    assert is_invertible(EX2)
    assert not is_invertible(ONES)
    assert not is_invertible(RationalMatrix.from_rows([[0]]))
    with pytest.raises(DimensionMismatch):
        is_invertible(RationalMatrix.from_rows([[1, 0]]))


def test_matrix_shape_checks():
    with pytest.raises(DimensionMismatch):
        RationalMatrix(2, 2, (1, 2, 3))
    with pytest.raises(DimensionMismatch):
        RationalMatrix.from_rows([[1, 2], [3]])
    assert (EX2 @ RationalMatrix.identity(3)) == EX2
    assert EX3.transpose() == EX3


def test_null_space_vectors_are_annihilated():
    m = RationalMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    basis = null_space(m)
    assert len(basis) == 3 - rank(m)
    for x in basis:
        assert m.apply(x) == (0, 0, 0)


def test_round_trip_on_random_invertible_matrices():
    rng = random.Random(20240611)
    checked = 0
    while checked < 50:
        n = rng.randint(1, 5)
        m = RationalMatrix(n, n, tuple(rng.randint(-4, 4) for _ in range(n * n)))
        if not is_invertible(m):
            continue
        x = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n))
        r = solve(m, m.apply(x))
        assert r.status is SolveStatus.UNIQUE
        assert r.solution == x
        checked += 1


@st.composite
def matrices(draw):
    rows = draw(st.integers(0, 4))
    cols = draw(st.integers(0, 4))
    entries = draw(st.lists(st.integers(-3, 3), min_size=rows * cols, max_size=rows * cols))
    return RationalMatrix(rows, cols, tuple(entries))


@settings(max_examples=150)
@given(matrices())
def test_rank_equals_rank_of_transpose(m):
    assert rank(m) == rank(m.transpose())


@settings(max_examples=150)
@given(matrices(), st.data())
def test_solve_substitutes_back_exactly(m, data):
    b = data.draw(st.lists(st.integers(-5, 5), min_size=m.rows, max_size=m.rows))
    r = solve(m, b)
    if r.status is SolveStatus.NONE:
        assert rank(m) < m.rows
    else:
        assert m.apply(r.solution) == tuple(Fraction(x) for x in b)
        assert r.nullity == m.cols - rank(m)
