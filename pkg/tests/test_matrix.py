import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from multirec.errors import SingularMatrix
from multirec.matrix import (Matrix, geometric_sum, is_invertible, mat_inverse, mat_mul, mat_pow, mat_sub,
                             null_space, rank, signed_geometric_sum, solve_columns, mat_vec)
from multirec.scalars import MixedKinds

from .systems import rand_invertible


def small_matrices(n):
    return st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                    min_size=n, max_size=n).map(Matrix)


def test_inverse_example():
    assert mat_inverse(Matrix([[2, 1], [1, 2]])) == Matrix([[F(2, 3), F(-1, 3)], [F(-1, 3), F(2, 3)]])


def test_singular():
    with pytest.raises(SingularMatrix):
        mat_inverse(Matrix([[1, 2], [2, 4]]))
    assert not is_invertible(Matrix([[0.0, 0.0], [0.0, 1.0]]))


def test_float_inverse():
    inv = mat_inverse(Matrix([[2.0, 1.0], [1.0, 2.0]]))
    assert inv.kind == "real"
    assert inv[0, 0] == pytest.approx(2 / 3, rel=1e-12)


def test_powers():
    assert mat_pow(Matrix([[2]]), -2) == Matrix([[F(1, 4)]])
    assert mat_pow(Matrix([[1, 1], [0, 1]]), 5) == Matrix([[1, 5], [0, 1]])
    assert mat_pow(Matrix([[5, 7], [1, 2]]), 0) == Matrix.identity(2)
    with pytest.raises(SingularMatrix):
        mat_pow(Matrix([[0]]), -1)


def test_geometric_sums():
    assert geometric_sum(Matrix([[2]]), 3) == Matrix([[7]])
    assert geometric_sum(Matrix([[2]]), 0) == Matrix([[0]])
    assert geometric_sum(Matrix([[1, 0], [0, 1]]), 4) == Matrix([[4, 0], [0, 4]])
    # S(-k; A) = -A^-1 S(k; A^-1): for [2], S(-2) = -(1/2 + 1/4)
    assert signed_geometric_sum(Matrix([[2]]), -2) == Matrix([[F(-3, 4)]])


def test_mixed_kinds_rejected():
    with pytest.raises(MixedKinds):
        mat_mul(Matrix([[1]]), Matrix([[1.0]]))


@settings(max_examples=60, deadline=None)
@given(small_matrices(3))
def test_inverse_property(A):
    if is_invertible(A):
        assert mat_mul(A, mat_inverse(A)) == Matrix.identity(3)
        assert mat_mul(mat_inverse(A), A) == Matrix.identity(3)
    else:
        assert rank(A) < 3 and null_space(A)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(-4, 8), st.integers(-4, 8))
def test_power_law(seed, j, k):
    A = rand_invertible(random.Random(seed), 2)
    assert mat_mul(mat_pow(A, j), mat_pow(A, k)) == mat_pow(A, j + k)


@settings(max_examples=60, deadline=None)
@given(small_matrices(2), st.integers(0, 9))
def test_geometric_identity(A, k):
    I = Matrix.identity(2)
    assert mat_mul(mat_sub(I, A), geometric_sum(A, k)) == mat_sub(I, mat_pow(A, k))


@settings(max_examples=40, deadline=None)
@given(small_matrices(3))
def test_null_space_vectors(A):
    for v in null_space(A):
        assert all(c == 0 for c in mat_vec(A, v))
    assert len(null_space(A)) + rank(A) == 3


def test_solve_columns():
    B = Matrix([[1, 0], [0, 1], [1, 1]])
    C = Matrix([[2], [3], [5]])
    assert solve_columns(B, C) == Matrix([[2], [3]])
