"""Dense small-matrix algebra over the three scalar kinds.

Matrices are immutable row-major tuples; vectors are plain tuples of scalars.
Everything is exact for the rational kind.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

from . import scalars
from .errors import RankMismatch, SingularMatrix
from .scalars import COMPLEX, RATIONAL, REAL, DEFAULT_TOLERANCE, MixedKinds, Tolerance

Vector = tuple


class Matrix:
    __slots__ = ("_rows", "_kind")

    def __init__(self, rows: Iterable[Iterable], kind: Optional[str] = None):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix rows")
        if kind is None:
            kind = scalars.infer_kind(v for r in rows for v in r if not isinstance(v, str))
        scalars.check_kind(kind)
        self._kind = kind
        self._rows = tuple(tuple(scalars.coerce(v, kind) for v in r) for r in rows)

    @classmethod
    def _raw(cls, rows, kind):
        # trusted constructor: entries already of the right kind
        obj = cls.__new__(cls)
        obj._rows = tuple(tuple(r) for r in rows)
        obj._kind = kind
        return obj

    @classmethod
    def identity(cls, n: int, kind: str = RATIONAL) -> Matrix:
        one, z = scalars.one_of(kind), scalars.zero_of(kind)
        return cls._raw([[one if i == j else z for j in range(n)] for i in range(n)], kind)

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None, kind: str = RATIONAL) -> Matrix:
        z = scalars.zero_of(kind)
        return cls._raw([[z] * (rows if cols is None else cols) for _ in range(rows)], kind)

    @classmethod
    def diag(cls, entries: Sequence, kind: Optional[str] = None) -> Matrix:
        n = len(entries)
        if kind is None:
            kind = scalars.infer_kind(entries)
        z = scalars.zero_of(kind)
        return cls([[entries[i] if i == j else z for j in range(n)] for i in range(n)], kind)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], kind: Optional[str] = None) -> Matrix:
        n = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(n)], kind)

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), len(self._rows[0])

    @property
    def n(self) -> int:
        r, c = self.shape
        if r != c:
            raise RankMismatch(f"matrix is {r}x{c}, not square")
        return r

    @property
    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.shape[1])]

    @property
    def T(self) -> Matrix:
        return Matrix._raw(zip(*self._rows), self._kind)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._kind == other._kind and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._kind, self._rows))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self._rows)
        return f"Matrix([{body}], kind={self._kind!r})"

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return mat_vec(self, other)

    def __add__(self, other: Matrix) -> Matrix:
        return mat_add(self, other)

    def __sub__(self, other: Matrix) -> Matrix:
        return mat_sub(self, other)

    def __neg__(self) -> Matrix:
        return Matrix._raw([[-v for v in r] for r in self._rows], self._kind)

    def scale(self, c) -> Matrix:
        c = scalars.coerce(c, self._kind)
        return Matrix._raw([[c * v for v in r] for r in self._rows], self._kind)

    def max_abs(self) -> float:
        return max(abs(v) for r in self._rows for v in r)

    def astype(self, kind: str) -> Matrix:
        if kind == self._kind:
            return self
        if self._kind == COMPLEX and kind != COMPLEX:
            raise MixedKinds("cannot narrow complex entries")
        if kind == RATIONAL:
            raise MixedKinds("cannot convert float entries to exact rationals")
        return Matrix(self._rows, kind)


def _same_kind(A: Matrix, B: Matrix) -> str:
    if A.kind != B.kind:
        raise MixedKinds(f"mixed scalar kinds: {A.kind} and {B.kind}")
    return A.kind


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    kind = _same_kind(A, B)
    (r, k), (k2, c) = A.shape, B.shape
    if k != k2:
        raise RankMismatch(f"cannot multiply {r}x{k} by {k2}x{c}")
    cols = list(zip(*B.rows))
    z = scalars.zero_of(kind)
    out = [[sum((a * b for a, b in zip(row, col)), z) for col in cols] for row in A.rows]
    return Matrix._raw(out, kind)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    kind = _same_kind(A, B)
    if A.shape != B.shape:
        raise RankMismatch(f"cannot add {A.shape} and {B.shape}")
    return Matrix._raw([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A.rows, B.rows)], kind)


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    kind = _same_kind(A, B)
    if A.shape != B.shape:
        raise RankMismatch(f"cannot subtract {B.shape} from {A.shape}")
    return Matrix._raw([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A.rows, B.rows)], kind)


def as_vector(x: Iterable, kind: str) -> Vector:
    return tuple(scalars.coerce(v, kind) for v in x)


def mat_vec(A: Matrix, x: Sequence) -> Vector:
    if len(x) != A.shape[1]:
        raise RankMismatch(f"cannot apply {A.shape[0]}x{A.shape[1]} matrix to length-{len(x)} vector")
    x = as_vector(x, A.kind)
    z = scalars.zero_of(A.kind)
    return tuple(sum((a * v for a, v in zip(row, x)), z) for row in A.rows)


def vec_add(x: Sequence, y: Sequence) -> Vector:
    if len(x) != len(y):
        raise RankMismatch("vector length mismatch")
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Sequence, y: Sequence) -> Vector:
    if len(x) != len(y):
        raise RankMismatch("vector length mismatch")
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c, x: Sequence) -> Vector:
    return tuple(c * v for v in x)


def zero_vector(n: int, kind: str) -> Vector:
    return (scalars.zero_of(kind),) * n


def mat_equal(A: Matrix, B: Matrix, tol: Optional[Tolerance] = None) -> bool:
    """Exact equality for rationals, entrywise relative tolerance for floats."""
    kind = _same_kind(A, B)
    if A.shape != B.shape:
        return False
    if kind == RATIONAL:
        return A.rows == B.rows
    tol = tol or DEFAULT_TOLERANCE
    return all(tol.close(a, b) for ra, rb in zip(A.rows, B.rows) for a, b in zip(ra, rb))


def vec_equal(x: Sequence, y: Sequence, kind: str, tol: Optional[Tolerance] = None) -> bool:
    if len(x) != len(y):
        return False
    if kind == RATIONAL:
        return tuple(x) == tuple(y)
    tol = tol or DEFAULT_TOLERANCE
    return all(tol.close(a, b) for a, b in zip(x, y))


def _pick_pivot(M, col, start, kind):
    best, best_abs = None, None
    for r in range(start, len(M)):
        v = M[r][col]
        if kind == RATIONAL:
            if v != 0:
                # smallest-height pivot keeps fractions short
                h = abs(v.numerator) + v.denominator
                if best is None or h < best_abs:
                    best, best_abs = r, h
        else:
            a = abs(v)
            if best is None or a > best_abs:
                best, best_abs = r, a
    return best


def mat_inverse(A: Matrix, tol: Optional[Tolerance] = None) -> Matrix:
    """Gauss-Jordan elimination with row pivoting.

    Exact kind pivots on any nonzero entry; float kinds use partial pivoting
    and declare the matrix singular when the best pivot falls below
    ``tol.pivot`` times the largest entry of A.
    """
    n = A.n
    kind = A.kind
    tol = tol or DEFAULT_TOLERANCE
    scale = A.max_abs()
    one, z = scalars.one_of(kind), scalars.zero_of(kind)
    M = [list(r) + [one if i == j else z for j in range(n)] for i, r in enumerate(A.rows)]
    for col in range(n):
        p = _pick_pivot(M, col, col, kind)
        if p is None or (kind != RATIONAL and abs(M[p][col]) <= tol.pivot * scale):
            raise SingularMatrix(f"matrix is singular (no usable pivot in column {col + 1})")
        M[col], M[p] = M[p], M[col]
        piv = M[col][col]
        M[col] = [v / piv for v in M[col]]
        for r in range(n):
            if r != col:
                f = M[r][col]
                if f != 0:
                    M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return Matrix._raw([row[n:] for row in M], kind)


def is_invertible(A: Matrix, tol: Optional[Tolerance] = None) -> bool:
    try:
        mat_inverse(A, tol)
    except SingularMatrix:
        return False
    return True


def mat_pow(A: Matrix, k: int, tol: Optional[Tolerance] = None) -> Matrix:
    """A^k by binary exponentiation; negative k goes through the inverse."""
    n = A.n
    if k < 0:
        A = mat_inverse(A, tol)
        k = -k
    result = Matrix.identity(n, A.kind)
    base = A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def geometric_sum(A: Matrix, k: int) -> Matrix:
    """S(k; A) = I + A + ... + A^(k-1), and the zero matrix for k = 0.

    Uses S(2j) = S(j) + A^j S(j) and S(2j+1) = S(2j) + A^(2j), walking the bits
    of k from the top, so no inverse of I - A is ever needed.
    """
    if k < 0:
        raise ValueError("geometric_sum needs k >= 0")
    n = A.n
    S = Matrix.zeros(n, kind=A.kind)
    P = Matrix.identity(n, A.kind)  # A^j for the current prefix j
    for bit in bin(k)[2:] if k else "":
        S = mat_add(S, mat_mul(P, S))
        P = mat_mul(P, P)
        if bit == "1":
            S = mat_add(S, P)
            P = mat_mul(P, A)
    return S


def signed_geometric_sum(A: Matrix, k: int, tol: Optional[Tolerance] = None) -> Matrix:
    """Extension of S(k; A) to negative k: S(-j; A) = -(A^-1 + ... + A^-j).

    Keeps S(k+1) = I + A S(k) valid for every integer k, which is what the
    affine closed form needs below the initial point.
    """
    if k >= 0:
        return geometric_sum(A, k)
    Ainv = mat_inverse(A, tol)
    return -mat_mul(Ainv, geometric_sum(Ainv, -k))


def solve_columns(B: Matrix, C: Matrix, tol: Optional[Tolerance] = None) -> Matrix:
    """Solve B X = C for X, where B (n x k) has full column rank.

    Consistency of the overdetermined rows is not checked; callers pass
    systems known to be consistent (restrictions to invariant subspaces).
    """
    kind = _same_kind(B, C)
    tol = tol or DEFAULT_TOLERANCE
    n, k = B.shape
    if C.shape[0] != n:
        raise RankMismatch("row count mismatch in solve_columns")
    if kind != RATIONAL:
        import numpy as np

        X, *_ = np.linalg.lstsq(np.array(B.rows, dtype=complex if kind == COMPLEX else float),
                                np.array(C.rows, dtype=complex if kind == COMPLEX else float),
                                rcond=None)
        return Matrix(X.tolist(), kind)
    w = C.shape[1]
    M = [list(rb) + list(rc) for rb, rc in zip(B.rows, C.rows)]
    for col in range(k):
        p = _pick_pivot(M, col, col, kind)
        if p is None:
            raise SingularMatrix("solve_columns: B lacks full column rank")
        M[col], M[p] = M[p], M[col]
        piv = M[col][col]
        M[col] = [v / piv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return Matrix._raw([M[i][k:k + w] for i in range(k)], kind)


def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    """Exact reduced row echelon form and pivot columns (rational kind only)."""
    if A.kind != RATIONAL:
        raise MixedKinds("rref is exact-only")
    M = [list(r) for r in A.rows]
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        p = _pick_pivot(M, c, r, RATIONAL)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [v / piv for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return Matrix._raw(M, RATIONAL), pivots


def null_space(A: Matrix) -> list[Vector]:
    """Exact basis of {x : A x = 0}, one vector per free column."""
    R, pivots = rref(A)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        x = [scalars.zero_of(RATIONAL)] * cols
        x[f] = scalars.one_of(RATIONAL)
        for i, p in enumerate(pivots):
            x[p] = -R[i, f]
        basis.append(tuple(x))
    return basis


def rank(A: Matrix) -> int:
    if A.kind == RATIONAL:
        return len(rref(A)[1])
    import numpy as np

    return int(np.linalg.matrix_rank(np.array(A.rows)))


def trace(A: Matrix):
    return sum((A[i, i] for i in range(A.n)), scalars.zero_of(A.kind))


def basis_vector(j: int, n: int, kind: str = RATIONAL) -> Vector:
    """e_j with 1 in position j (1-based)."""
    if not 1 <= j <= n:
        raise IndexError(f"basis index {j} out of range 1..{n}")
    return tuple(scalars.one_of(kind) if i == j - 1 else scalars.zero_of(kind) for i in range(n))


def commute(A: Matrix, B: Matrix, tol: Optional[Tolerance] = None) -> bool:
    return mat_equal(mat_mul(A, B), mat_mul(B, A), tol)
