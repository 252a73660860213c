"""JSON spec files describing a linear multiple recurrence, and JSON encodings.

Layout::

    {
      "rank": 2, "dim": 1, "scalar": "rational", "mode": "constant",
      "A": [[["2"]], [["3"]]],           # one n x n matrix per axis
      "b": [["1"], ["2"]],               # optional; omitted means homogeneous
      "t0": [0, 0], "x0": ["0"],
      "invertible": true                 # optional expectation, verified
    }

Table mode replaces "A"/"b" by a declared box and one entry per box point::

    "mode": "table",
    "box": {"lo": [0, 0], "hi": [3, 3]},
    "table": [{"t": [0, 0], "A": [...], "b": [...]}, ...]

Rationals are "p/q" strings (integers may be plain ints), reals are JSON
numbers, complex scalars are [re, im] pairs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from . import scalars
from .errors import SingularMatrix
from .lattice import LatticeBox, MultiIndex, as_index
from .linear import LinearSystem
from .matrix import Matrix, Vector, is_invertible


class SpecError(ValueError):
    """Malformed or inconsistent spec file."""


@dataclass(frozen=True)
class SpecFile:
    rank: int
    dim: int
    kind: str
    mode: str
    system: LinearSystem
    t0: MultiIndex
    x0: Vector
    box: Optional[LatticeBox] = None
    invertible: Optional[bool] = None
    raw: Optional[dict] = None


# scalar / matrix encodings ---------------------------------------------------------

def format_vector(x, kind: str) -> list:
    return [scalars.format_scalar(v, kind) for v in x]


def format_matrix(M: Matrix) -> list:
    return [format_vector(r, M.kind) for r in M.rows]


def format_index(t: MultiIndex) -> list:
    return t.to_list()


def parse_vector(obj, kind: str, n: Optional[int] = None) -> Vector:
    if not isinstance(obj, list):
        raise SpecError(f"expected a vector (JSON array), got {obj!r}")
    try:
        v = tuple(scalars.parse_scalar(e, kind) for e in obj)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"bad {kind} scalar in {obj!r}: {exc}") from exc
    if n is not None and len(v) != n:
        raise SpecError(f"vector {obj!r} has length {len(v)}, expected {n}")
    return v


def parse_matrix(obj, kind: str, n: Optional[int] = None) -> Matrix:
    if not isinstance(obj, list) or not obj:
        raise SpecError(f"expected a matrix (array of rows), got {obj!r}")
    rows = [parse_vector(r, kind) for r in obj]
    if not rows[0] or any(len(r) != len(rows[0]) for r in rows):
        raise SpecError(f"ragged or empty matrix {obj!r}")
    M = Matrix._raw(rows, kind)
    if n is not None and M.shape != (n, n):
        raise SpecError(f"matrix has shape {M.shape}, expected {(n, n)}")
    return M


def parse_index(obj, m: Optional[int] = None) -> MultiIndex:
    if not isinstance(obj, list) or not obj or not all(isinstance(c, int) and not isinstance(c, bool)
                                                       for c in obj):
        raise SpecError(f"expected an integer array for a multi-index, got {obj!r}")
    t = MultiIndex(obj)
    if m is not None and t.rank != m:
        raise SpecError(f"multi-index {obj!r} has rank {t.rank}, expected {m}")
    return t


# spec files ------------------------------------------------------------------------

def _require(d: dict, key: str):
    if key not in d:
        raise SpecError(f"missing field {key!r}")
    return d[key]


def parse_spec(data: Any) -> SpecFile:
    if not isinstance(data, dict):
        raise SpecError("spec file must hold a JSON object")
    m = _require(data, "rank")
    n = _require(data, "dim")
    if not (isinstance(m, int) and m >= 1 and isinstance(n, int) and n >= 1):
        raise SpecError("rank and dim must be positive integers")
    kind = data.get("scalar", scalars.RATIONAL)
    if kind not in scalars.KINDS:
        raise SpecError(f"unknown scalar kind {kind!r}")
    mode = data.get("mode", "constant")
    t0 = parse_index(_require(data, "t0"), m)
    x0 = parse_vector(_require(data, "x0"), kind, n)
    invertible = data.get("invertible")
    if invertible is not None and not isinstance(invertible, bool):
        raise SpecError("invertible must be true or false")

    if mode == "constant":
        As = _require(data, "A")
        if not isinstance(As, list) or len(As) != m:
            raise SpecError(f"need exactly {m} matrices in A")
        As = [parse_matrix(A, kind, n) for A in As]
        bs = data.get("b")
        if bs is not None:
            if not isinstance(bs, list) or len(bs) != m:
                raise SpecError(f"need exactly {m} vectors in b")
            bs = [parse_vector(b, kind, n) for b in bs]
        system = LinearSystem.constant(As, bs, kind=kind)
        box = None
        if invertible is not None and system.all_invertible != invertible:
            raise SpecError(f"spec declares invertible={invertible}, but the matrices disagree")
    elif mode == "table":
        box_obj = _require(data, "box")
        if not isinstance(box_obj, dict):
            raise SpecError("box must be an object with lo and hi")
        lo, hi = parse_index(_require(box_obj, "lo"), m), parse_index(_require(box_obj, "hi"), m)
        try:
            box = LatticeBox(lo, hi)
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
        entries = _require(data, "table")
        if not isinstance(entries, list):
            raise SpecError("table must be an array")
        A_tab: dict = {}
        b_tab: dict = {}
        has_b = None
        for e in entries:
            if not isinstance(e, dict):
                raise SpecError("table entries must be objects")
            t = parse_index(_require(e, "t"), m)
            if t not in box:
                raise SpecError(f"table entry {t} lies outside the declared box")
            if t in A_tab:
                raise SpecError(f"duplicate table entry for {t}")
            mats = _require(e, "A")
            if not isinstance(mats, list) or len(mats) != m:
                raise SpecError(f"entry {t}: need exactly {m} matrices")
            A_tab[t] = [parse_matrix(M, kind, n) for M in mats]
            entry_has_b = "b" in e
            if has_b is None:
                has_b = entry_has_b
            elif has_b != entry_has_b:
                raise SpecError("either every table entry has b or none does")
            if entry_has_b:
                vecs = e["b"]
                if not isinstance(vecs, list) or len(vecs) != m:
                    raise SpecError(f"entry {t}: need exactly {m} vectors in b")
                b_tab[t] = [parse_vector(v, kind, n) for v in vecs]
        if len(A_tab) != box.size:
            raise SpecError(f"table covers {len(A_tab)} of the {box.size} box points")
        if t0 not in box:
            raise SpecError(f"t0={t0} lies outside the declared box")
        if invertible is not None:
            actual = all(is_invertible(M) for mats in A_tab.values() for M in mats)
            if actual != invertible:
                raise SpecError(f"spec declares invertible={invertible}, but the table disagrees")
        A_fns = [(lambda t, a=a: A_tab[t][a]) for a in range(m)]
        b_fns = [(lambda t, a=a: b_tab[t][a]) for a in range(m)] if has_b else None
        system = LinearSystem.varying(m, n, A_fns, b_fns, kind=kind, domain=box, invertible=invertible)
    else:
        raise SpecError(f"unknown coefficient mode {mode!r}")
    return SpecFile(m, n, kind, mode, system, t0, x0, box, invertible, data)


def load_spec(path) -> SpecFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from exc
    return parse_spec(data)


def spec_to_dict(spec: SpecFile) -> dict:
    """Canonical JSON form; parse_spec(spec_to_dict(s)) rebuilds an equal system."""
    out: dict = {"rank": spec.rank, "dim": spec.dim, "scalar": spec.kind, "mode": spec.mode}
    sys = spec.system
    if spec.mode == "constant":
        out["A"] = [format_matrix(A) for A in sys.matrices]
        if not sys.is_homogeneous:
            out["b"] = [format_vector(b, spec.kind) for b in sys.vectors]
    else:
        out["box"] = {"lo": spec.box.lo.to_list(), "hi": spec.box.hi.to_list()}
        table = []
        for t in spec.box.points():
            entry = {"t": t.to_list(),
                     "A": [format_matrix(sys.A(a, t)) for a in range(1, spec.rank + 1)]}
            if not sys.is_homogeneous:
                entry["b"] = [format_vector(sys.b(a, t), spec.kind) for a in range(1, spec.rank + 1)]
            table.append(entry)
        out["table"] = table
    out["t0"] = spec.t0.to_list()
    out["x0"] = format_vector(spec.x0, spec.kind)
    if spec.invertible is not None:
        out["invertible"] = spec.invertible
    return out


def dumps(obj) -> str:
    """Deterministic JSON text used for every CLI output."""
    return json.dumps(obj, indent=2) + "\n"
