import random
from fractions import Fraction as F

import pytest

from multirec.errors import (DependentInitials, IncompatibleSystem, NoInvertibleShift, NotDiagonalizableOverField,
                             SingularMatrix, ZeroEigenvalue)
from multirec.lattice import LatticeBox, MultiIndex
from multirec.linear import (LinearSystem, TransitionMatrix, c_factor, check_linear_compatibility,
                             closed_form_transition, diagonal_reduction, eigen_closed_form, fixed_point,
                             solution_basis, solve_affine, solve_affine_fixed_point, solve_homogeneous,
                             solve_step, transition)
from multirec.matrix import Matrix, vec_add, vec_scale

from .systems import compatible_constant, gauge_varying, separable_varying

SCALAR = LinearSystem.constant([[[2]], [[3]]], [[1], [2]])
PAIR = LinearSystem.constant([[[2, 1], [1, 2]], [[0, 1], [1, 0]]])


def shifted_scalar():
    return LinearSystem.varying(2, 1, [lambda t: Matrix([[t[1] + 1]]), lambda t: Matrix([[t[2] + 1]])])


def test_check_examples():
    assert check_linear_compatibility(SCALAR).holds
    jordan = LinearSystem.constant([[[1, 1], [0, 1]], [[1, 0], [1, 1]]])
    report = check_linear_compatibility(jordan)
    assert not report.holds and report.witnesses[0].condition == "matrix"
    assert check_linear_compatibility(LinearSystem.constant([[[5, 1], [2, 7]]], [[1, 1]])).holds
    broken = LinearSystem.constant([[[2]], [[3]]], [[1], [1]])
    assert [w.condition for w in check_linear_compatibility(broken).witnesses] == ["vector"]


def test_varying_check_needs_region():
    with pytest.raises(ValueError):
        check_linear_compatibility(shifted_scalar())
    assert check_linear_compatibility(shifted_scalar(), LatticeBox((0, 0), (3, 3))).holds


def test_c_factor_and_transition_examples():
    sys = shifted_scalar()
    assert c_factor(sys, 1, 0, (4, 4)) == Matrix.identity(1)
    assert c_factor(sys, 1, 2, (0, 1)) == Matrix([[2]])
    assert transition(sys, (2, 1), (0, 0)) == Matrix([[2]])
    assert transition(sys, (3, 3), (3, 3)) == Matrix.identity(1)
    assert transition(SCALAR.homogeneous_part(), (2, 1), (0, 0)) == Matrix([[12]])


def test_transition_below_and_incomparable():
    H = SCALAR.homogeneous_part()
    assert transition(H, (0, 0), (1, 0)) == Matrix([[F(1, 2)]])
    # chi((1,-1),(0,0)) = chi((1,-1),(0,-1)) chi((0,0),(0,-1))^-1 = 2 / 3
    assert transition(H, (1, -1), (0, 0)) == Matrix([[F(2, 3)]])
    singular = LinearSystem.constant([[[0]], [[1]]])
    with pytest.raises(SingularMatrix, match="invertib"):
        transition(singular, (0, 0), (1, 0))


def test_transition_cache_is_bit_identical():
    sys = separable_varying(7, 2, 2)
    cached, fresh = TransitionMatrix(sys), TransitionMatrix(sys, cache=False)
    for t in LatticeBox((0, 0), (3, 3)):
        first = cached(t, (0, 0))
        assert cached(t, (0, 0)) is first
        assert fresh(t, (0, 0)) == first


def test_solve_examples():
    assert solve_homogeneous(SCALAR.homogeneous_part(), (0, 0), [1], (2, 1)) == (12,)
    assert solve_homogeneous(PAIR, (0, 0), [1, 0], (1, 1)) == (1, 2)
    assert solve_homogeneous(PAIR, (0, 0), [0, 0], (3, 1)) == (0, 0)
    assert solve_affine(SCALAR, (0, 0), [0], (1, 1)) == (5,)
    assert solve_affine(SCALAR, (0, 0), [7], (0, 0)) == (7,)
    assert solve_affine(SCALAR, (0, 0), [0], (-2, 1)) == (F(-1, 4),)
    assert solve_step(SCALAR, (0, 0), [0], (-2, 1)) == (F(-1, 4),)
    with pytest.raises(ValueError):
        solve_homogeneous(SCALAR, (0, 0), [1], (1, 1))


def test_affine_below_t0_singular():
    sys = LinearSystem.constant([[[0]], [[1]]], [[1], [0]])
    with pytest.raises(SingularMatrix, match="invertib"):
        solve_affine(sys, (0, 0), [0], (-1, 0))
    with pytest.raises(SingularMatrix, match="invertib"):
        solve_step(sys, (0, 0), [0], (-1, 0))


def test_fixed_point_examples():
    assert fixed_point(SCALAR) == (-1,)
    assert solve_affine_fixed_point(SCALAR, (0, 0), [0], (1, 1)) == (5,)
    assert solve_affine_fixed_point(SCALAR, (0, 0), [-1], (4, 2)) == (-1,)
    # A_1 = I is skipped; v comes from axis 2
    sys = LinearSystem.constant([[[1]], [[3]]], [[0], [2]])
    assert fixed_point(sys) == (-1,)
    with pytest.raises(NoInvertibleShift):
        fixed_point(LinearSystem.constant([[[1]], [[1]]], [[1], [2]]))
    with pytest.raises(IncompatibleSystem):
        fixed_point(LinearSystem.constant([[[2]], [[3]]], [[1], [1]]))


def test_homogeneous_fixed_point_is_zero():
    assert fixed_point(LinearSystem.constant([[[2, 0], [0, 3]]], [[0, 0]])) == (0, 0)


def test_solution_basis_examples():
    basis = solution_basis(SCALAR.homogeneous_part(), (0, 0))
    assert basis.evaluate(1, (2, 1)) == (12,)
    basis = solution_basis(PAIR, (0, 0))
    assert basis.matrix((0, 0)) == Matrix.identity(2)
    custom = solution_basis(PAIR, (1, 1), [(1, 1), (1, -1)])
    assert [custom.evaluate(j, (1, 1)) for j in (1, 2)] == [(1, 1), (1, -1)]
    with pytest.raises(DependentInitials):
        solution_basis(PAIR, (0, 0), [(1, 1), (2, 2)])


def test_superposition():
    sys = separable_varying(3, 2, 2)
    x, y = (1, 2), (-3, F(1, 2))
    for t in LatticeBox((0, 0), (2, 2)):
        combo = solve_homogeneous(sys, (0, 0), vec_add(vec_scale(2, x), y), t)
        assert combo == vec_add(vec_scale(2, solve_homogeneous(sys, (0, 0), x, t)),
                                solve_homogeneous(sys, (0, 0), y, t))


def test_particular_plus_homogeneous():
    sys = separable_varying(11, 2, 2, affine=True)
    y0 = solve_step(sys, (0, 0), (0, 0), (0, 0))
    for t in LatticeBox((0, 0), (2, 2)):
        full = solve_step(sys, (0, 0), (1, 1), t)
        particular = solve_step(sys, (0, 0), (0, 0), t)
        assert full == vec_add(particular, solve_homogeneous(sys.homogeneous_part(), (0, 0), (1, 1), t))
    assert y0 == (0, 0)


def test_closed_form_examples():
    cf = eigen_closed_form(PAIR, (0, 0), [1, 0])
    assert cf((1, 1)) == (1, 2)
    assert cf.c == (F(1, 2), F(1, 2))
    assert closed_form_transition(PAIR, (1, 1), (0, 0)) == Matrix([[1, 2], [2, 1]])
    assert closed_form_transition(PAIR, (3, 2), (3, 2)) == Matrix.identity(2)
    ident = LinearSystem.constant([Matrix.identity(2)] * 3)
    assert eigen_closed_form(ident, (0, 0, 0), [4, 5])((2, -1, 3)) == (4, 5)
    diag = LinearSystem.constant([[[2, 0], [0, 3]], [[5, 0], [0, 7]]])
    assert closed_form_transition(diag, (2, 1), (0, 0)) == Matrix([[20, 0], [0, 63]])


def test_closed_form_single_mode():
    cf = eigen_closed_form(PAIR, (0, 0), [1, 1])  # eigenvector with lambdas (3, 1)
    assert cf((2, 5)) == (9, 9)


def test_closed_form_errors():
    with pytest.raises(NotDiagonalizableOverField):
        eigen_closed_form(LinearSystem.constant([[[1, 1], [0, 1]]]), (0,), [1, 0])
    singular = LinearSystem.constant([[[0, 0], [0, 1]]])
    cf = eigen_closed_form(singular, (0,), [1, 1])
    assert cf((2,)) == (0, 1)
    with pytest.raises(ZeroEigenvalue):
        cf((-1,))


def test_diagonal_reduction_examples():
    assert diagonal_reduction(SCALAR, (5, -2)) == Matrix([[6]])
    assert diagonal_reduction(shifted_scalar(), (0, 0)) == Matrix([[1]])
    one = LinearSystem.varying(1, 1, [lambda t: Matrix([[t[1]]])])
    assert diagonal_reduction(one, (4,)) == Matrix([[4]])


@pytest.mark.parametrize("seed", range(5))
def test_gauge_transition_matches_stepping(seed):
    sys = gauge_varying(seed, 2, 2)
    chi = TransitionMatrix(sys)
    for t in LatticeBox((-1, -1), (2, 2)):
        x = solve_step(sys, (0, 0), (1, -1), t)
        assert x == solve_homogeneous(sys, (0, 0), (1, -1), t, chi)


@pytest.mark.parametrize("seed", range(5))
def test_constant_affine_matches_stepping_everywhere(seed):
    sys = compatible_constant(random.Random(seed), 3, 2, invertible=True)
    for t in LatticeBox((-1, -1, -1), (1, 1, 1)):
        assert solve_affine(sys, (0, 0, 0), (1, 2), t) == solve_step(sys, (0, 0, 0), (1, 2), t)


def test_float_kind_solve():
    sys = LinearSystem.constant([[[0.5]], [[0.25]]], [[1.0], [1.5]])
    assert solve_affine(sys, (0, 0), [0.0], (1, 1))[0] == pytest.approx(1.75, rel=1e-12)
    assert solve_affine_fixed_point(sys, (0, 0), [0.0], (1, 1))[0] == pytest.approx(1.75, rel=1e-12)


def test_shared_transition_matrix_across_threads():
    from concurrent.futures import ThreadPoolExecutor
    sys = separable_varying(21, 2, 2)
    shared = TransitionMatrix(sys)
    points = list(LatticeBox((0, 0), (3, 3)))
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda t: shared(t, (0, 0)), points * 4))
    fresh = TransitionMatrix(sys, cache=False)
    assert results == [fresh(t, (0, 0)) for t in points] * 4
