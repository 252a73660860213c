"""Eigen-decomposition and simultaneous diagonalization of commuting families.

Exact kind: characteristic polynomial by Faddeev-LeVerrier, rational roots,
eigenspaces as exact null spaces. Spectra that do not split over Q are
rejected instead of being approximated.

Float kinds: eigenvalues from LAPACK (via numpy), clustered by tolerance;
eigenspaces from the SVD of A - lambda I.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import scalars
from .errors import (ConvergenceFailure, NotCommuting, NotDiagonalizableOverField,
                     RankMismatch, SingularMatrix)
from .matrix import (Matrix, Vector, mat_equal, mat_inverse, mat_mul, mat_sub,
                     null_space, solve_columns, trace)
from .scalars import COMPLEX, RATIONAL, REAL, DEFAULT_TOLERANCE, Tolerance


@dataclass(frozen=True)
class Eigenspace:
    value: object
    vectors: tuple[Vector, ...]

    @property
    def dimension(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class EigenStructure:
    """Common eigenbasis of a commuting family.

    ``T`` has the common eigenvectors as columns; ``lambdas[j][a]`` is the
    eigenvalue of family member a (0-based) on column j.
    """

    T: Matrix
    T_inv: Matrix
    lambdas: tuple[tuple, ...]

    @property
    def n(self) -> int:
        return self.T.n

    @property
    def m(self) -> int:
        return len(self.lambdas[0]) if self.lambdas else 0

    def vector(self, j: int) -> Vector:
        return self.T.column(j)

    def diagonal(self, axis: int) -> Matrix:
        """D(A_axis), with axis 1-based."""
        return Matrix.diag([row[axis - 1] for row in self.lambdas], self.T.kind)


def charpoly(A: Matrix) -> list:
    """Monic characteristic polynomial det(lambda I - A), coefficients low to high.

    Faddeev-LeVerrier: M_1 = I, c_{n-k} = -tr(A M_k)/k, M_{k+1} = A M_k + c_{n-k} I.
    """
    n = A.n
    kind = A.kind
    one = scalars.one_of(kind)
    coeffs = [scalars.zero_of(kind)] * (n + 1)
    coeffs[n] = one
    I = Matrix.identity(n, kind)
    M = I
    for k in range(1, n + 1):
        AM = mat_mul(A, M)
        c = -trace(AM) / k
        coeffs[n - k] = c
        M = AM + I.scale(c)
    return coeffs


def _poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs, r):
    """Divide by (x - r); coefficients low to high, exact remainder assumed zero."""
    n = len(coeffs) - 1
    out = [0] * n
    carry = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = carry
        carry = coeffs[i] + carry * r
    return out


def _divisors(k: int) -> list[int]:
    k = abs(k)
    small, large = [], []
    d = 1
    while d * d <= k:
        if k % d == 0:
            small.append(d)
            if d * d != k:
                large.append(k // d)
        d += 1
    return small + large[::-1]


def rational_roots(coeffs: Sequence[Fraction]) -> tuple[list[tuple[Fraction, int]], int]:
    """Rational roots with multiplicities of a polynomial (coefficients low to high).

    Returns (roots, leftover_degree); leftover_degree > 0 means part of the
    polynomial does not split into rational linear factors.
    """
    coeffs = [Fraction(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    roots: dict[Fraction, int] = {}
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs.pop(0)
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
    if len(coeffs) > 1:
        lcm = 1
        for c in coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        ints = [v // g for v in ints]
        candidates = sorted({Fraction(s * p, q) for p in _divisors(ints[0]) for q in _divisors(ints[-1])
                             for s in (1, -1)})
        for r in candidates:
            while len(coeffs) > 1 and _poly_eval(coeffs, r) == 0:
                coeffs = _deflate(coeffs, r)
                roots[r] = roots.get(r, 0) + 1
    return sorted(roots.items()), len(coeffs) - 1


def _normalize_exact(v: Vector) -> Vector:
    for c in v:
        if c != 0:
            return tuple(x / c for x in v)
    raise ValueError("zero vector has no direction")


def _eigen_exact(A: Matrix) -> list[Eigenspace]:
    n = A.n
    roots, leftover = rational_roots(charpoly(A))
    if leftover:
        raise NotDiagonalizableOverField(
            f"characteristic polynomial has a degree-{leftover} factor without rational roots")
    I = Matrix.identity(n, RATIONAL)
    spaces = []
    for lam, mult in roots:
        basis = null_space(mat_sub(A, I.scale(lam)))
        if len(basis) != mult:
            raise NotDiagonalizableOverField(
                f"eigenvalue {lam} has algebraic multiplicity {mult} "
                f"but geometric multiplicity {len(basis)}")
        spaces.append(Eigenspace(lam, tuple(_normalize_exact(v) for v in basis)))
    return spaces


def _np_dtype(kind):
    return complex if kind == COMPLEX else float


def _normalize_float(v):
    import numpy as np

    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    # fix the phase: first significant coordinate real positive
    k = int(np.argmax(np.abs(v) > 1e-8))
    v = v * (abs(v[k]) / v[k])
    return v


def _eigen_float(A: Matrix, tol: Tolerance) -> list[Eigenspace]:
    import numpy as np

    kind = A.kind
    a = np.array(A.rows, dtype=_np_dtype(kind))
    n = A.n
    try:
        w = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(f"eigenvalue iteration did not converge: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise ConvergenceFailure("eigenvalue iteration produced non-finite values")
    if kind == REAL:
        for lam in w:
            if abs(lam.imag) > tol.cluster * max(1.0, abs(lam)):
                raise NotDiagonalizableOverField(
                    f"eigenvalue {lam} is not real; use the complex scalar kind")
        w = w.real.astype(complex)

    order = sorted(range(n), key=lambda i: (w[i].real, w[i].imag))
    clusters: list[list[complex]] = []
    for i in order:
        lam = complex(w[i])
        for cl in clusters:
            if abs(cl[0] - lam) <= tol.cluster * max(1.0, abs(lam)):
                cl.append(lam)
                break
        else:
            clusters.append([lam])

    spaces = []
    used = 0
    for cl in clusters:
        lam = sum(cl) / len(cl)
        if kind == REAL:
            lam = complex(lam.real, 0.0)
        shifted = a - lam * np.eye(n)
        _, sv, vh = np.linalg.svd(shifted)
        k = len(cl)
        small = sv[n - k:]
        if np.any(small > tol.null * max(1.0, sv[0] if len(sv) else 0.0)):
            raise NotDiagonalizableOverField(
                f"eigenvalue {lam} has multiplicity {k} but a smaller eigenspace")
        basis = vh[n - k:].conj()
        vecs = []
        for row in basis:
            v = _normalize_float(row)
            if kind == REAL:
                v = v.real
                v = v / np.linalg.norm(v)
            vecs.append(tuple(scalars.coerce(complex(x) if kind == COMPLEX else float(x.real), kind)
                              for x in v))
        value = lam if kind == COMPLEX else lam.real
        spaces.append(Eigenspace(value, tuple(vecs)))
        used += k
    if used != n:  # pragma: no cover - clusters always account for every eigenvalue
        raise NotDiagonalizableOverField("eigenvalue bookkeeping failed")
    return spaces


def eigen_decompose(A: Matrix, tol: Optional[Tolerance] = None) -> list[Eigenspace]:
    """Eigenvalues with eigenspace bases, ordered by eigenvalue.

    Raises NotDiagonalizableOverField when the eigenspaces do not span the
    whole space over the scalar field of A.
    """
    tol = tol or DEFAULT_TOLERANCE
    if not A.is_square:
        raise RankMismatch("eigen_decompose needs a square matrix")
    if A.kind == RATIONAL:
        return _eigen_exact(A)
    return _eigen_float(A, tol)


def check_commuting(family: Sequence[Matrix], tol: Optional[Tolerance] = None) -> None:
    for a in range(len(family)):
        for b in range(a + 1, len(family)):
            if not mat_equal(mat_mul(family[a], family[b]), mat_mul(family[b], family[a]), tol):
                raise NotCommuting(f"matrices {a + 1} and {b + 1} do not commute", pair=(a + 1, b + 1))


def _restrict(A: Matrix, B: Matrix, tol: Tolerance) -> Matrix:
    """Matrix of A on the A-invariant subspace spanned by the columns of B."""
    return solve_columns(B, mat_mul(A, B), tol)


def _rayleigh(family, T, T_inv) -> list[tuple]:
    """Float eigenvalues re-read as diagonal entries of T^-1 A T."""
    diag = [mat_mul(mat_mul(T_inv, A), T) for A in family]
    return [tuple(D[j, j] for D in diag) for j in range(T.n)]


def simultaneous_diagonalize(family: Sequence[Matrix], tol: Optional[Tolerance] = None) -> EigenStructure:
    """Common eigenbasis of pairwise commuting diagonalizable matrices.

    Diagonalize the first matrix; inside each eigenspace restrict the next
    matrix and recurse. Columns come out ordered by the eigenvalues of
    family[0], ties broken by family[1], and so on.
    """
    tol = tol or DEFAULT_TOLERANCE
    family = list(family)
    if not family:
        raise ValueError("empty family")
    n = family[0].n
    kind = family[0].kind
    for A in family:
        if A.kind != kind:
            raise scalars.MixedKinds("family mixes scalar kinds")
        if A.n != n:
            raise RankMismatch("family members have different sizes")
    check_commuting(family, tol)

    columns: list[Vector] = []
    lambdas: list[tuple] = []

    def refine(idx: int, B: Matrix, prefix: tuple):
        if idx == len(family):
            for j in range(B.shape[1]):
                columns.append(B.column(j))
                lambdas.append(prefix)
            return
        R = _restrict(family[idx], B, tol)
        for space in eigen_decompose(R, tol):
            W = Matrix.from_columns(space.vectors, kind)
            refine(idx + 1, mat_mul(B, W), prefix + (space.value,))

    refine(0, Matrix.identity(n, kind), ())

    if kind == RATIONAL:
        columns = [_normalize_exact(v) for v in columns]
    else:
        columns = [tuple(scalars.coerce(x if kind == COMPLEX else float(x.real), kind)
                         for x in (_normalize_float(v).real if kind == REAL else _normalize_float(v)))
                   for v in columns]
    T = Matrix.from_columns(columns, kind)
    try:
        T_inv = mat_inverse(T, tol)
    except SingularMatrix as exc:
        raise NotDiagonalizableOverField("common eigenvectors are not independent") from exc
    if kind != RATIONAL:
        lambdas = _rayleigh(family, T, T_inv)

    structure = EigenStructure(T, T_inv, tuple(lambdas))
    for a, A in enumerate(family, start=1):
        rebuilt = mat_mul(mat_mul(T, structure.diagonal(a)), T_inv)
        if not mat_equal(rebuilt, A, tol):
            raise NotDiagonalizableOverField(f"reconstruction of matrix {a} failed")
    return structure
