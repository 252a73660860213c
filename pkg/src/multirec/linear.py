"""Linear multiple recurrences x(t + 1_a) = A_a(t) x(t) + b_a(t).

Covers the compatibility conditions, the fundamental (transition) matrix
chi(t, s) and its single-axis factors C_{a,k}(t), homogeneous and affine
solvers, solution-space bases and the constant-coefficient closed forms.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from . import scalars
from .core import CompatibilityReport, StepFamily, Witness, solve_bidirectional, solve_forward
from .eigen import EigenStructure, simultaneous_diagonalize
from .errors import (DependentInitials, DomainError, IncompatibleSystem, NoInvertibleShift,
                     NotConstant, RankMismatch, SingularMatrix, ZeroEigenvalue)
from .lattice import LatticeBox, MultiIndex, as_index, comparable, leq, meet
from .matrix import (Matrix, Vector, as_vector, geometric_sum, is_invertible, mat_add, mat_equal,
                     mat_inverse, mat_mul, mat_pow, mat_sub, mat_vec, signed_geometric_sum,
                     vec_add, vec_equal, vec_scale, vec_sub, zero_vector)
from .scalars import DEFAULT_TOLERANCE, RATIONAL, Tolerance

CoefficientFn = Callable[[MultiIndex], object]
Domain = Union[None, MultiIndex, LatticeBox]


class LinearSystem:
    """Coefficient data of a linear multiple recurrence.

    Build with :meth:`constant` (fixed A_a, b_a) or :meth:`varying`
    (callables t -> A_a(t), t -> b_a(t)). Axes are 1-based in every accessor.
    """

    def __init__(self, m: int, n: int, kind: str, A_fns: Sequence[CoefficientFn],
                 b_fns: Optional[Sequence[CoefficientFn]] = None, *, domain: Domain = None,
                 invertible: Optional[bool] = None, constant=None, tol: Optional[Tolerance] = None):
        if m < 1 or n < 1:
            raise ValueError("rank and dimension must be positive")
        if len(A_fns) != m or (b_fns is not None and len(b_fns) != m):
            raise RankMismatch(f"need exactly {m} coefficient functions per family")
        self.m = m
        self.n = n
        self.kind = scalars.check_kind(kind)
        self.tol = tol or DEFAULT_TOLERANCE
        self._A_fns = tuple(A_fns)
        self._b_fns = None if b_fns is None else tuple(b_fns)
        if isinstance(domain, (list, tuple)):
            domain = as_index(domain)
        self.domain = domain
        self._invertible_hint = invertible
        self._constant = constant  # (As, bs) or None

    # construction -----------------------------------------------------------

    @classmethod
    def constant(cls, As: Sequence, bs: Optional[Sequence] = None, kind: Optional[str] = None,
                 tol: Optional[Tolerance] = None) -> LinearSystem:
        As = [A if isinstance(A, Matrix) and (kind is None or A.kind == kind) else Matrix(
            A.rows if isinstance(A, Matrix) else A, kind) for A in As]
        if not As:
            raise ValueError("need at least one coefficient matrix")
        kind = As[0].kind
        n = As[0].n
        for A in As:
            if A.kind != kind:
                raise scalars.MixedKinds("coefficient matrices mix scalar kinds")
            if A.shape != (n, n):
                raise RankMismatch("coefficient matrices must all be n x n")
        if bs is not None:
            bs = [as_vector(b, kind) for b in bs]
            if len(bs) != len(As) or any(len(b) != n for b in bs):
                raise RankMismatch("need one length-n vector b_a per axis")
            if all(v == 0 for b in bs for v in b):
                bs = None
        m = len(As)
        A_fns = [(lambda t, A=A: A) for A in As]
        b_fns = None if bs is None else [(lambda t, b=b: b) for b in bs]
        return cls(m, n, kind, A_fns, b_fns, constant=(tuple(As), None if bs is None else tuple(bs)),
                   tol=tol)

    @classmethod
    def varying(cls, m: int, n: int, A: Sequence[CoefficientFn], b: Optional[Sequence[CoefficientFn]] = None,
                *, kind: str = RATIONAL, domain: Domain = None, invertible: Optional[bool] = None,
                tol: Optional[Tolerance] = None) -> LinearSystem:
        return cls(m, n, kind, A, b, domain=domain, invertible=invertible, tol=tol)

    def homogeneous_part(self) -> LinearSystem:
        if self._constant is not None:
            return LinearSystem.constant(self._constant[0], tol=self.tol)
        return LinearSystem(self.m, self.n, self.kind, self._A_fns, None, domain=self.domain,
                            invertible=self._invertible_hint, tol=self.tol)

    # properties -------------------------------------------------------------

    @property
    def is_constant(self) -> bool:
        return self._constant is not None

    @property
    def is_homogeneous(self) -> bool:
        return self._b_fns is None

    @property
    def matrices(self) -> tuple[Matrix, ...]:
        if self._constant is None:
            raise NotConstant("system has varying coefficients")
        return self._constant[0]

    @property
    def vectors(self) -> tuple[Vector, ...]:
        if self._constant is None:
            raise NotConstant("system has varying coefficients")
        bs = self._constant[1]
        return bs if bs is not None else tuple(zero_vector(self.n, self.kind) for _ in range(self.m))

    @property
    def all_invertible(self) -> Optional[bool]:
        """True/False when known, None for varying systems without a hint."""
        if self._constant is not None:
            return all(is_invertible(A, self.tol) for A in self._constant[0])
        return self._invertible_hint

    def in_domain(self, t: MultiIndex) -> bool:
        if self.domain is None:
            return True
        if isinstance(self.domain, LatticeBox):
            return t in self.domain
        return leq(self.domain, t)

    def _check(self, axis: int, t: MultiIndex) -> None:
        if not 1 <= axis <= self.m:
            raise IndexError(f"axis {axis} out of range 1..{self.m}")
        if t.rank != self.m:
            raise RankMismatch(f"point {t} has rank {t.rank}, system has rank {self.m}")
        if not self.in_domain(t):
            raise DomainError(f"coefficients are not defined at {t}")

    def A(self, axis: int, t) -> Matrix:
        t = as_index(t)
        self._check(axis, t)
        value = self._A_fns[axis - 1](t)
        if not isinstance(value, Matrix) or value.kind != self.kind:
            value = Matrix(value.rows if isinstance(value, Matrix) else value, self.kind)
        if value.shape != (self.n, self.n):
            raise RankMismatch(f"A_{axis}({t}) has shape {value.shape}, expected {(self.n, self.n)}")
        return value

    def b(self, axis: int, t) -> Vector:
        t = as_index(t)
        self._check(axis, t)
        if self._b_fns is None:
            return zero_vector(self.n, self.kind)
        value = as_vector(self._b_fns[axis - 1](t), self.kind)
        if len(value) != self.n:
            raise RankMismatch(f"b_{axis}({t}) has length {len(value)}, expected {self.n}")
        return value

    def equal(self, x, y) -> bool:
        return vec_equal(x, y, self.kind, self.tol)

    def step_family(self) -> StepFamily:
        """The recurrence as a generic step family on K^n (the stepping oracle)."""
        def forward(axis):
            return lambda t, x: vec_add(mat_vec(self.A(axis, t), x), self.b(axis, t))

        def backward(axis):
            def inv(t, y):
                try:
                    Ainv = mat_inverse(self.A(axis, t), self.tol)
                except SingularMatrix as exc:
                    raise SingularMatrix(
                        f"A_{axis}({t}) is singular; stepping below t0 requires invertible coefficients"
                    ) from exc
                return mat_vec(Ainv, vec_sub(y, self.b(axis, t)))
            return inv

        inverses = None
        if self.all_invertible is not False:
            inverses = [backward(a) for a in range(1, self.m + 1)]
        floor = self.domain if isinstance(self.domain, MultiIndex) else None
        return StepFamily([forward(a) for a in range(1, self.m + 1)], inverses, floor, self.equal)


# compatibility -------------------------------------------------------------------

def check_linear_compatibility(sys: LinearSystem, region: Optional[LatticeBox] = None) -> CompatibilityReport:
    """Check the matrix and vector compatibility conditions.

    Constant systems: A_a A_b = A_b A_a and (A_a - I) b_b = (A_b - I) b_a,
    exactly once (region ignored). Varying systems: the pointwise conditions
    at every t of ``region`` for every pair a < b.
    """
    witnesses = []
    checked = 0
    m, n, kind = sys.m, sys.n, sys.kind
    if sys.is_constant:
        As, bs = sys.matrices, sys.vectors
        I = Matrix.identity(n, kind)
        for a in range(m):
            for b in range(a + 1, m):
                checked += 1
                left, right = mat_mul(As[a], As[b]), mat_mul(As[b], As[a])
                if not mat_equal(left, right, sys.tol):
                    witnesses.append(Witness(a + 1, b + 1, None, None, left, right, "matrix"))
                if not sys.is_homogeneous:
                    lv = mat_vec(mat_sub(As[a], I), bs[b])
                    rv = mat_vec(mat_sub(As[b], I), bs[a])
                    if not vec_equal(lv, rv, kind, sys.tol):
                        witnesses.append(Witness(a + 1, b + 1, None, None, lv, rv, "vector"))
        return CompatibilityReport(tuple(witnesses), None, checked, "constant coefficients")

    if region is None:
        raise ValueError("varying systems need a region to check")
    for t in region.points():
        for a in range(1, m + 1):
            for b in range(a + 1, m + 1):
                checked += 1
                ta, tb = t.shift(a), t.shift(b)
                left = mat_mul(sys.A(a, tb), sys.A(b, t))
                right = mat_mul(sys.A(b, ta), sys.A(a, t))
                if not mat_equal(left, right, sys.tol):
                    witnesses.append(Witness(a, b, t, None, left, right, "matrix"))
                if not sys.is_homogeneous:
                    lv = vec_add(mat_vec(sys.A(a, tb), sys.b(b, t)), sys.b(a, tb))
                    rv = vec_add(mat_vec(sys.A(b, ta), sys.b(a, t)), sys.b(b, ta))
                    if not vec_equal(lv, rv, kind, sys.tol):
                        witnesses.append(Witness(a, b, t, None, lv, rv, "vector"))
    return CompatibilityReport(tuple(witnesses), region, checked)


# fundamental matrix ---------------------------------------------------------------

def c_factor(sys: LinearSystem, axis: int, k: int, t) -> Matrix:
    """C_{axis,k}(t) = A(t+(k-1)1_axis) ... A(t+1_axis) A(t); identity for k = 0."""
    if k < 0:
        raise ValueError("c_factor needs k >= 0")
    t = as_index(t)
    result = Matrix.identity(sys.n, sys.kind)
    for j in range(k):
        # rightmost factor first: A(t + j 1_axis) multiplies from the left
        result = mat_mul(sys.A(axis, t.shift(axis, j)), result)
    return result


class TransitionMatrix:
    """chi(t, s) for a fixed system, with a thread-safe per-instance cache."""

    def __init__(self, sys: LinearSystem, cache: bool = True):
        self.system = sys
        self._cache: Optional[dict] = {} if cache else None
        self._lock = threading.Lock()

    def __call__(self, t, s) -> Matrix:
        t, s = as_index(t), as_index(s)
        if self._cache is not None:
            with self._lock:
                hit = self._cache.get((t, s))
            if hit is not None:
                return hit
        value = self._compute(t, s)
        if self._cache is not None:
            with self._lock:
                self._cache.setdefault((t, s), value)
        return value

    def _forward(self, t: MultiIndex, s: MultiIndex) -> Matrix:
        sys = self.system
        if sys.is_constant:
            result = Matrix.identity(sys.n, sys.kind)
            for axis, A in enumerate(sys.matrices, start=1):
                result = mat_mul(result, mat_pow(A, t[axis] - s[axis]))
            return result
        # C_{1,.}(s^1, t^2..t^m) C_{2,.}(s^1, s^2, t^3..) ... C_{m,.}(s)
        result = Matrix.identity(sys.n, sys.kind)
        for axis in range(1, sys.m + 1):
            base = MultiIndex(s.coords[:axis] + t.coords[axis:])
            result = mat_mul(result, c_factor(sys, axis, t[axis] - s[axis], base))
        return result

    def _inverse(self, M: Matrix, what: str) -> Matrix:
        try:
            return mat_inverse(M, self.system.tol)
        except SingularMatrix as exc:
            raise SingularMatrix(f"{what} is singular; chi(t, s) for s not <= t "
                                 "requires invertible coefficients") from exc

    def _compute(self, t: MultiIndex, s: MultiIndex) -> Matrix:
        if leq(s, t):
            return self._forward(t, s)
        if leq(t, s):
            return self._inverse(self(s, t), f"chi({s}, {t})")
        r = meet(t, s)
        return mat_mul(self(t, r), self._inverse(self(s, r), f"chi({s}, {r})"))


def transition(sys: LinearSystem, t, s) -> Matrix:
    return TransitionMatrix(sys, cache=False)(t, s)


# solvers -------------------------------------------------------------------------

def solve_step(sys: LinearSystem, t0, x0, t) -> Vector:
    """Stepping oracle: walk the recurrence itself along the canonical path."""
    t0, t = as_index(t0), as_index(t)
    x0 = as_vector(x0, sys.kind)
    family = sys.step_family()
    if leq(t0, t):
        return solve_forward(family, t0, x0, t)
    if not family.invertible:
        raise SingularMatrix(f"target {t} is not >= t0={t0}; going below t0 requires "
                             "every A_a to be invertible")
    return solve_bidirectional(family, t0, x0, t)


def _require_homogeneous(sys: LinearSystem) -> None:
    if not sys.is_homogeneous:
        raise ValueError("system has nonzero b; use the affine solvers or homogeneous_part()")


def solve_homogeneous(sys: LinearSystem, t0, x0, t, chi: Optional[TransitionMatrix] = None) -> Vector:
    """x(t) = chi(t, t0) x0."""
    _require_homogeneous(sys)
    chi = chi or TransitionMatrix(sys, cache=False)
    return mat_vec(chi(t, t0), as_vector(x0, sys.kind))


def _require_below_ok(sys: LinearSystem, t0: MultiIndex, t: MultiIndex) -> None:
    if not leq(t0, t) and not sys.all_invertible:
        raise SingularMatrix(f"target {t} is not >= t0={t0}; this needs every A_a to be invertible")


def solve_affine(sys: LinearSystem, t0, x0, t) -> Vector:
    """Affine solution value.

    Constant coefficients use the closed form
    prod A_a^{d_a} x0 + S(d_1; A_1) b_1 + sum_{b>=2} (prod_{a<b} A_a^{d_a}) S(d_b; A_b) b_b
    with d = t - t0; varying coefficients fall back to stepping.
    """
    t0, t = as_index(t0), as_index(t)
    x0 = as_vector(x0, sys.kind)
    if not sys.is_constant:
        return solve_step(sys, t0, x0, t)
    _require_below_ok(sys, t0, t)
    As, bs = sys.matrices, sys.vectors
    d = [t[a] - t0[a] for a in range(1, sys.m + 1)]
    powers = [mat_pow(A, k, sys.tol) for A, k in zip(As, d)]
    prefix = Matrix.identity(sys.n, sys.kind)  # product of A_a^{d_a} for a < current axis
    x = zero_vector(sys.n, sys.kind)
    for beta in range(sys.m):
        S = signed_geometric_sum(As[beta], d[beta], sys.tol)
        x = vec_add(x, mat_vec(mat_mul(prefix, S), bs[beta]))
        prefix = mat_mul(prefix, powers[beta])
    return vec_add(mat_vec(prefix, x0), x)


def fixed_point(sys: LinearSystem) -> Vector:
    """Constant solution v with (I - A_a) v = b_a for every axis."""
    if not sys.is_constant:
        raise NotConstant("fixed_point needs constant coefficients")
    As, bs = sys.matrices, sys.vectors
    I = Matrix.identity(sys.n, sys.kind)
    for a, A in enumerate(As):
        try:
            inv = mat_inverse(mat_sub(I, A), sys.tol)
        except SingularMatrix:
            continue
        v = mat_vec(inv, bs[a])
        for b, B in enumerate(As):
            if not vec_equal(mat_vec(mat_sub(I, B), v), bs[b], sys.kind, sys.tol):
                raise IncompatibleSystem(
                    f"(I - A_{b + 1}) v != b_{b + 1} for v from axis {a + 1}; "
                    "the vector compatibility condition fails")
        return v
    raise NoInvertibleShift("I - A_a is singular for every axis")


def solve_affine_fixed_point(sys: LinearSystem, t0, x0, t, v: Optional[Vector] = None) -> Vector:
    """x(t) = (prod A_a^{t^a - t0^a}) (x0 - v) + v."""
    t0, t = as_index(t0), as_index(t)
    x0 = as_vector(x0, sys.kind)
    v = fixed_point(sys) if v is None else as_vector(v, sys.kind)
    _require_below_ok(sys, t0, t)
    P = Matrix.identity(sys.n, sys.kind)
    for a, A in enumerate(sys.matrices, start=1):
        P = mat_mul(P, mat_pow(A, t[a] - t0[a], sys.tol))
    return vec_add(mat_vec(P, vec_sub(x0, v)), v)


# solution space ------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionBasis:
    """n solutions y_j of a homogeneous system with y_j(t0) = v_j."""

    system: LinearSystem
    t0: MultiIndex
    initials: tuple[Vector, ...]
    chi: TransitionMatrix = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.initials)

    def initial_matrix(self) -> Matrix:
        return Matrix.from_columns(self.initials, self.system.kind)

    def evaluate(self, j: int, t) -> Vector:
        """y_j(t), with j 1-based."""
        return mat_vec(self.chi(t, self.t0), self.initials[j - 1])

    def solution(self, j: int) -> Callable[[MultiIndex], Vector]:
        return lambda t: self.evaluate(j, t)

    def matrix(self, t) -> Matrix:
        """Columns y_1(t), ..., y_n(t)."""
        return mat_mul(self.chi(t, self.t0), self.initial_matrix())

    def coordinates(self, x0) -> Vector:
        """Coefficients a with sum_j a_j y_j equal to the solution through (t0, x0)."""
        V_inv = mat_inverse(self.initial_matrix(), self.system.tol)
        return mat_vec(V_inv, as_vector(x0, self.system.kind))


def solution_basis(sys: LinearSystem, t0, initials: Optional[Sequence] = None) -> SolutionBasis:
    _require_homogeneous(sys)
    t0 = as_index(t0)
    n, kind = sys.n, sys.kind
    if initials is None:
        one, z = scalars.one_of(kind), scalars.zero_of(kind)
        initials = [tuple(one if i == j else z for i in range(n)) for j in range(n)]
    initials = tuple(as_vector(v, kind) for v in initials)
    if len(initials) != n or any(len(v) != n for v in initials):
        raise RankMismatch(f"need exactly {n} initial vectors of length {n}")
    try:
        mat_inverse(Matrix.from_columns(initials, kind), sys.tol)
    except SingularMatrix as exc:
        raise DependentInitials("initial vectors are linearly dependent") from exc
    return SolutionBasis(sys, t0, initials, TransitionMatrix(sys))


# constant-coefficient closed forms -------------------------------------------------

def _eigen_for(sys: LinearSystem) -> EigenStructure:
    if not sys.is_constant:
        raise NotConstant("closed forms need constant coefficients")
    return simultaneous_diagonalize(sys.matrices, sys.tol)


def _mode_factor(lams: Sequence, d: Sequence[int], kind: str):
    """prod_a lambda_a^{d_a}, refusing negative powers of a zero eigenvalue."""
    acc = scalars.one_of(kind)
    for lam, k in zip(lams, d):
        if k < 0 and lam == 0:
            raise ZeroEigenvalue("a zero eigenvalue cannot be raised to a negative power")
        acc = acc * lam ** k
    return acc


@dataclass(frozen=True)
class ClosedForm:
    """x(t) = sum_j c_j (prod_a lambda_{j,a}^{t^a - t0^a}) v_j."""

    eigen: EigenStructure
    c: Vector
    t0: MultiIndex

    @property
    def kind(self) -> str:
        return self.eigen.T.kind

    def __call__(self, t) -> Vector:
        return self.evaluate(t)

    def evaluate(self, t) -> Vector:
        t = as_index(t)
        d = [a - b for a, b in zip(t.coords, self.t0.coords)]
        n = self.eigen.n
        x = zero_vector(n, self.kind)
        for j in range(n):
            coef = self.c[j] * _mode_factor(self.eigen.lambdas[j], d, self.kind)
            x = vec_add(x, vec_scale(coef, self.eigen.vector(j)))
        return x


def eigen_closed_form(sys: LinearSystem, t0, x0, eigen: Optional[EigenStructure] = None) -> ClosedForm:
    _require_homogeneous(sys)
    eigen = eigen or _eigen_for(sys)
    c = mat_vec(eigen.T_inv, as_vector(x0, sys.kind))
    return ClosedForm(eigen, c, as_index(t0))


def closed_form_transition(sys: LinearSystem, t, t0, eigen: Optional[EigenStructure] = None) -> Matrix:
    """chi(t, t0) = T prod_a diag(lambda_{.,a}^{t^a - t0^a}) T^-1."""
    eigen = eigen or _eigen_for(sys)
    t, t0 = as_index(t), as_index(t0)
    d = [a - b for a, b in zip(t.coords, t0.coords)]
    D = Matrix.diag([_mode_factor(row, d, sys.kind) for row in eigen.lambdas], sys.kind)
    return mat_mul(mat_mul(eigen.T, D), eigen.T_inv)


def diagonal_reduction(sys: LinearSystem, t) -> Matrix:
    """A(t) = A_m(t + 1_1 + ... + 1_{m-1}) ... A_2(t + 1_1) A_1(t).

    Any solution of the multiple recurrence satisfies x(t + 1) = A(t) x(t).
    """
    t = as_index(t)
    result = Matrix.identity(sys.n, sys.kind)
    base = t
    for axis in range(1, sys.m + 1):
        result = mat_mul(sys.A(axis, base), result)
        base = base.shift(axis)
    return result
