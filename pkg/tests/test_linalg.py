from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from hqft.linalg import Mat, kernel_basis, rank, rref, solve


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_rank_matches_sympy(rows):
    assert rank(Mat.from_dense(rows)) == sympy.Matrix(rows).rank()


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_dense_and_sparse_paths_agree(rows):
    m = Mat.from_dense(rows)
    assert rank(m, threshold=0.0) == rank(m, threshold=2.0)


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_kernel_is_kernel_of_right_size(rows):
    m = Mat.from_dense(rows)
    ker = kernel_basis(m)
    assert len(ker) == m.ncols - rank(m)
    for v in ker:
        assert not m.apply(v)


@given(matrices(), st.lists(st.integers(-2, 2), min_size=6, max_size=6))
@settings(max_examples=100, deadline=None)
def test_solve_recovers_a_preimage(rows, xs):
    m = Mat.from_dense(rows)
    x = {j: Fraction(v) for j, v in enumerate(xs[:m.ncols]) if v}
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


def test_solve_reports_inconsistent_system():
    m = Mat.from_dense([[1, 1], [2, 2]])
    assert solve(m, {0: Fraction(1), 1: Fraction(3)}) is None


def test_rref_pivots_are_unit_columns():
    piv, cols = rref(Mat.from_dense([[2, 4, 1], [1, 2, 0]]))
    assert sorted(cols) == [0, 2]
    assert piv[0][0] == 1 and piv[2][2] == 1


def test_matrix_product_and_transpose():
    a = Mat.from_dense([[1, 2], [0, 1]])
    b = Mat.from_dense([[0, 1], [1, 0]])
    assert (a @ b).to_dense() == [[2, 1], [1, 0]]
    assert (a @ b).T() == b.T() @ a.T()


def test_rationals_stay_exact():
    m = Mat.from_dense([[Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 2), 1]])
    assert rank(m) == 1
