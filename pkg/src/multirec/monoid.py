"""Multiple recurrences whose coefficients live in a monoid acting on a state set.

x(t + 1_a) = A_a(t) . x(t), with A_a(t) in a monoid (N, *, E) and "." an
action of N on the states. The matrix monoid acting on K^n recovers the
homogeneous linear recurrence; the additive monoid (K^n, +, 0) is what the
affine linear recurrence reduces to after factoring out chi(t, t0).
"""
from __future__ import annotations

import functools
import operator
from dataclasses import dataclass
from typing import Any, Callable, Generic, Iterable, Optional, Sequence, TypeVar

from .core import CompatibilityReport, StepFamily, Witness, check_compatibility
from .errors import DomainError, IncompatibleSystem, RankMismatch
from .lattice import LatticeBox, MultiIndex, as_index, leq, ones
from .linear import LinearSystem, TransitionMatrix
from .matrix import Matrix, Vector, as_vector, mat_inverse, mat_mul, mat_vec, vec_add, vec_equal, zero_vector
from .scalars import RATIONAL

Elem = TypeVar("Elem")


@dataclass(frozen=True)
class MonoidSpec(Generic[Elem]):
    combine: Callable[[Any, Any], Any]
    identity: Any
    equal: Callable[[Any, Any], bool] = operator.eq
    name: str = "monoid"

    def product(self, elems: Iterable) -> Any:
        """Left-to-right product e_1 * e_2 * ... (identity when empty)."""
        acc = self.identity
        for e in elems:
            acc = self.combine(acc, e)
        return acc

    def power(self, a, k: int):
        if k < 0:
            raise ValueError("monoid powers need k >= 0")
        result, base = self.identity, a
        while k:
            if k & 1:
                result = self.combine(result, base)
            k >>= 1
            if k:
                base = self.combine(base, base)
        return result


@dataclass(frozen=True)
class MonoidAction(Generic[Elem]):
    monoid: MonoidSpec
    apply: Callable[[Any, Any], Any]
    state_equal: Callable[[Any, Any], bool] = operator.eq


@dataclass(frozen=True)
class MonoidCoefficients(Generic[Elem]):
    """Per-axis coefficient functions t -> A_a(t) with values in a monoid."""

    functions: Sequence[Callable[[MultiIndex], Any]]
    domain_floor: Optional[MultiIndex] = None

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if self.domain_floor is not None:
            object.__setattr__(self, "domain_floor", as_index(self.domain_floor))

    @classmethod
    def constant(cls, elems: Sequence) -> MonoidCoefficients:
        return cls([(lambda t, e=e: e) for e in elems])

    @property
    def rank(self) -> int:
        return len(self.functions)

    def __call__(self, axis: int, t) -> Any:
        t = as_index(t)
        if t.rank != self.rank:
            raise RankMismatch(f"point {t} has rank {t.rank}, coefficients have rank {self.rank}")
        if self.domain_floor is not None and not leq(self.domain_floor, t):
            raise DomainError(f"coefficients are not defined at {t}")
        return self.functions[axis - 1](t)


# built-in instances ----------------------------------------------------------------

def additive_integers() -> MonoidSpec:
    return MonoidSpec(operator.add, 0, name="(Z, +)")


def word_monoid() -> MonoidSpec:
    """Free monoid of strings under concatenation; non-commutative test bed."""
    return MonoidSpec(operator.add, "", name="words")


def additive_vectors(n: int, kind: str = RATIONAL) -> MonoidSpec:
    def equal(x, y):
        return vec_equal(x, y, kind)
    return MonoidSpec(vec_add, zero_vector(n, kind), equal, name=f"({kind}^{n}, +)")


def matrix_monoid(n: int, kind: str = RATIONAL) -> MonoidSpec:
    from .matrix import mat_equal
    return MonoidSpec(mat_mul, Matrix.identity(n, kind), mat_equal, name=f"(M_{n}({kind}), *)")


def matrix_vector_action(n: int, kind: str = RATIONAL) -> MonoidAction:
    return MonoidAction(matrix_monoid(n, kind), mat_vec, lambda x, y: vec_equal(x, y, kind))


def translation_action(monoid: MonoidSpec) -> MonoidAction:
    """Additive monoid acting on itself by a . x = a + x."""
    return MonoidAction(monoid, monoid.combine, monoid.equal)


def regular_action(monoid: MonoidSpec) -> MonoidAction:
    """The monoid acting on itself by left multiplication."""
    return MonoidAction(monoid, monoid.combine, monoid.equal)


# recurrence operations -------------------------------------------------------------

def check_monoid_compatibility(coeffs: MonoidCoefficients, monoid: MonoidSpec,
                               region: LatticeBox) -> CompatibilityReport:
    """Element-level condition A_a(t+1_b) A_b(t) = A_b(t+1_a) A_a(t) on region."""
    if region.rank != coeffs.rank:
        raise RankMismatch("region rank differs from the coefficient rank")
    witnesses = []
    checked = 0
    m = coeffs.rank
    for t in region.points():
        for a in range(1, m + 1):
            for b in range(a + 1, m + 1):
                checked += 1
                left = monoid.combine(coeffs(a, t.shift(b)), coeffs(b, t))
                right = monoid.combine(coeffs(b, t.shift(a)), coeffs(a, t))
                if not monoid.equal(left, right):
                    witnesses.append(Witness(a, b, t, None, left, right, "element"))
    return CompatibilityReport(tuple(witnesses), region, checked)


def action_step_family(coeffs: MonoidCoefficients, action: MonoidAction) -> StepFamily:
    steps = [(lambda t, x, a=a: action.apply(coeffs(a, t), x)) for a in range(1, coeffs.rank + 1)]
    return StepFamily(steps, None, coeffs.domain_floor, action.state_equal)


def check_action_compatibility(coeffs: MonoidCoefficients, action: MonoidAction,
                               region: LatticeBox, states: Iterable) -> CompatibilityReport:
    """Action-level condition, sampled over the given states."""
    return check_compatibility(action_step_family(coeffs, action), region, states)


def c_element(coeffs: MonoidCoefficients, monoid: MonoidSpec, axis: int, k: int, t) -> Any:
    """A(t+(k-1)1_axis) * ... * A(t); the identity for k = 0."""
    if k < 0:
        raise ValueError("c_element needs k >= 0")
    t = as_index(t)
    return monoid.product(coeffs(axis, t.shift(axis, j)) for j in range(k - 1, -1, -1))


def transition_element(coeffs: MonoidCoefficients, monoid: MonoidSpec, t, s) -> Any:
    """Monoid transition function chi(t, s) for s <= t, in the same factor order as the matrix case."""
    t, s = as_index(t), as_index(s)
    if not leq(s, t):
        raise DomainError(f"{s} is not <= {t}; a general monoid has no inverses")
    factors = []
    for axis in range(1, coeffs.rank + 1):
        base = MultiIndex(s.coords[:axis] + t.coords[axis:])
        factors.append(c_element(coeffs, monoid, axis, t[axis] - s[axis], base))
    return monoid.product(factors)


def solve_monoid_action(coeffs: MonoidCoefficients, action: MonoidAction, t0, x0, t) -> Any:
    """x(t) = chi(t, t0) . x0."""
    return action.apply(transition_element(coeffs, action.monoid, t, t0), x0)


# affine reduction ------------------------------------------------------------------

def affine_reduce(sys: LinearSystem, t0, check_region: Optional[LatticeBox] = None) -> MonoidCoefficients:
    """Additive coefficients A~_a(t) = chi(t + 1_a, t0)^-1 b_a(t), defined for t >= t0.

    With x~(t) = chi(t, t0)^-1 x(t), the affine recurrence becomes
    x~(t + 1_a) = A~_a(t) + x~(t). Compatibility of the reduced family is
    checked on ``check_region`` (default: the box t0 .. t0 + (2,...,2)).
    """
    t0 = as_index(t0)
    chi = TransitionMatrix(sys)

    @functools.lru_cache(maxsize=None)
    def chi_inv(t: MultiIndex) -> Matrix:
        return mat_inverse(chi(t, t0), sys.tol)

    def reduced(axis):
        @functools.lru_cache(maxsize=None)
        def value(t: MultiIndex) -> Vector:
            return mat_vec(chi_inv(t.shift(axis)), sys.b(axis, t))
        return lambda t: value(as_index(t))

    coeffs = MonoidCoefficients([reduced(a) for a in range(1, sys.m + 1)], domain_floor=t0)
    if check_region is None:
        check_region = LatticeBox(t0, t0 + ones(sys.m).scale(2))
    report = check_monoid_compatibility(coeffs, additive_vectors(sys.n, sys.kind), check_region)
    if not report.holds:
        w = report.witnesses[0]
        raise IncompatibleSystem(f"reduced coefficients violate compatibility at t={w.t}, "
                                 f"axes ({w.alpha}, {w.beta})")
    return coeffs


def solve_affine_via_reduction(sys: LinearSystem, t0, x0, t, anchor=None,
                               reduced: Optional[MonoidCoefficients] = None) -> Vector:
    """x(t) = chi(t, r) (chi(t0, r)^-1 x0 + chi~(t, t0)) for an anchor r <= t0 (default r = t0).

    chi~ is the additive transition element of the reduced coefficients; with
    r = t0 this is x(t) = chi(t, t0) x0 + chi(t, t0) chi~(t, t0).
    """
    t0, t = as_index(t0), as_index(t)
    anchor = t0 if anchor is None else as_index(anchor)
    if not leq(anchor, t0):
        raise DomainError("the reduction anchor must lie below t0")
    if not leq(t0, t):
        raise DomainError(f"{t} is not >= t0={t0}")
    x0 = as_vector(x0, sys.kind)
    if reduced is None:
        reduced = affine_reduce(sys, anchor)
    chi = TransitionMatrix(sys)
    tilde = transition_element(reduced, additive_vectors(sys.n, sys.kind), t, t0)
    start = x0 if anchor == t0 else mat_vec(mat_inverse(chi(t0, anchor), sys.tol), x0)
    return mat_vec(chi(t, anchor), vec_add(start, tilde))
