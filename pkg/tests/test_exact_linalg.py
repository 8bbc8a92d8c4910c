from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bottgit.exact_linalg import (
    DimensionError,
    SparseMatrix,
    Vector,
    in_image,
    is_zero_product,
    kernel_basis,
    nullspace,
    primitive_integer,
    rank,
)
from oracles import dense_matmul, dense_rank


def M(rows):
    return SparseMatrix.from_dense(rows)


def test_rank_examples():
    assert rank(SparseMatrix.identity(2)) == 2
    assert rank(SparseMatrix.zero(3, 4)) == 0
    assert rank(M([[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(SparseMatrix.identity(2)) == []
    (v,) = kernel_basis(M([[1, -1]]))
    assert v[0] == v[1] != 0
    (w,) = kernel_basis(M([[1, 2], [2, 4]]))
    assert w[0] == -2 * w[1] and w[1] != 0


def test_in_image_examples():
    assert in_image(SparseMatrix.identity(3), Vector.from_list([1, Fraction(2, 3), -5]))
    assert not in_image(SparseMatrix.zero(2, 2), Vector.from_list([0, 1]))
    assert in_image(M([[1], [2]]), Vector.from_list([2, 4]))
    assert not in_image(M([[1], [2]]), Vector.from_list([2, 5]))


def test_in_image_dimension_mismatch():
    with pytest.raises(DimensionError):
        in_image(SparseMatrix.identity(2), Vector.from_list([1, 2, 3]))


def test_no_stored_zeros_and_bounds():
    m = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 2)})
    assert m.entries == {(1, 1): Fraction(1, 2)}
    with pytest.raises(IndexError):
        SparseMatrix(2, 2, {(2, 0): 1})


def test_primitive_integer():
    assert primitive_integer({0: Fraction(1, 2), 3: Fraction(-1, 3)}) == {0: 3, 3: -2}


small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def dense_matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # rational entries, often sparse
    entry = st.one_of(st.just(0), st.just(0), small_ints, st.fractions(min_value=-3, max_value=3, max_denominator=4))
    return [[draw(entry) for _ in range(c)] for _ in range(r)]


@settings(max_examples=150, deadline=None)
@given(dense_matrices())
def test_rank_matches_dense_oracle(rows):
    m = M(rows)
    expected = dense_rank(rows)
    assert rank(m) == expected
    assert rank(m, pivot="sparsest") == expected
    assert rank(m.transpose()) == expected


@settings(max_examples=150, deadline=None)
@given(dense_matrices())
def test_kernel_is_a_basis_of_the_nullspace(rows):
    m = M(rows)
    free, vecs = nullspace(m)
    assert len(vecs) == m.cols - dense_rank(rows)
    for f, v in zip(free, vecs):
        assert (m @ v).is_zero()
        assert v[f] == 1
        assert all(v[g] == 0 for g in free if g != f)
    if vecs:
        assert dense_rank([v.to_list() for v in vecs]) == len(vecs)


@settings(max_examples=100, deadline=None)
@given(dense_matrices(), st.lists(small_ints, min_size=6, max_size=6))
def test_image_membership(rows, xs):
    m = M(rows)
    x = Vector.from_list(xs[: m.cols])
    assert in_image(m, m @ x)
    # a vector outside the span raises the rank of [m | v]
    for k in range(m.rows):
        e = Vector(m.rows, {k: 1})
        extended = [r + [1 if i == k else 0] for i, r in enumerate(rows)]
        assert in_image(m, e) == (dense_rank(extended) == dense_rank(rows))


@settings(max_examples=100, deadline=None)
@given(dense_matrices(max_cols=4), dense_matrices(max_rows=4))
def test_zero_product_matches_dense(a, b):
    b = [row for row in b][: len(a[0])]
    if len(b) < len(a[0]):
        b = b + [[0] * len(b[0])] * (len(a[0]) - len(b))
    prod = dense_matmul(a, b)
    assert is_zero_product(M(a), M(b)) == all(v == 0 for r in prod for v in r)
    assert (M(a) @ M(b)).is_zero() == is_zero_product(M(a), M(b))


def test_kernel_times_matrix_is_zero_product():
    m = M([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    k = SparseMatrix.from_columns(3, kernel_basis(m))
    assert is_zero_product(m, k)
