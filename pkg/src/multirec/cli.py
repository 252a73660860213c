"""Command-line front end.

Exit codes: 0 success, 1 domain failure (violation, singularity, method not
applicable), 2 usage or spec-file error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import linear, monoid
from .core import CompatibilityReport, solve_region
from .errors import MultirecError
from .lattice import LatticeBox, MultiIndex, leq
from .scalars import MixedKinds
from .specfile import (SpecError, SpecFile, dumps, format_index, format_matrix, format_vector,
                       load_spec)

METHODS = ("step", "closed", "fixed-point", "reduction")


class MethodInapplicable(MultirecError):
    pass


class _UsageError(Exception):
    pass


def parse_index_arg(text: str) -> MultiIndex:
    """'2,1' or '[2,1]' -> MultiIndex((2, 1))."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    try:
        return MultiIndex(int(c) for c in body.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad multi-index {text!r}; use e.g. 2,1") from exc


def parse_box_arg(text: str) -> LatticeBox:
    """'0,0..3,3' -> box from (0,0) to (3,3)."""
    if ".." not in text:
        raise argparse.ArgumentTypeError(f"bad box {text!r}; use lo..hi, e.g. 0,0..3,3")
    lo, hi = text.split("..", 1)
    try:
        return LatticeBox(parse_index_arg(lo), parse_index_arg(hi))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _rank_check(spec: SpecFile, *points: MultiIndex) -> None:
    for p in points:
        if p is not None and p.rank != spec.rank:
            raise _UsageError(f"multi-index {list(p.coords)} has rank {p.rank}, spec has rank {spec.rank}")


def _box_rank_check(spec: SpecFile, box: Optional[LatticeBox]) -> None:
    if box is not None:
        _rank_check(spec, box.lo, box.hi)


def _default_check_region(spec: SpecFile) -> Optional[LatticeBox]:
    if spec.box is None:
        return None
    if any(h - l < 1 for l, h in zip(spec.box.lo.coords, spec.box.hi.coords)):
        return LatticeBox.point(spec.box.lo) if spec.rank == 1 else None
    return spec.box.shrink_upper(1)


def _value(x, kind):
    if isinstance(x, tuple):
        return format_vector(x, kind)
    return format_matrix(x)


def report_to_json(report: CompatibilityReport, kind: str) -> dict:
    return {
        "holds": report.holds,
        "checked": report.checked,
        "region": None if report.region is None else {"lo": format_index(report.region.lo),
                                                       "hi": format_index(report.region.hi)},
        "witnesses": [
            {
                "alpha": w.alpha,
                "beta": w.beta,
                "t": None if w.t is None else format_index(w.t),
                "condition": w.condition,
                "left": _value(w.left, kind),
                "right": _value(w.right, kind),
            }
            for w in report.witnesses
        ],
    }


def _check(spec: SpecFile, box: Optional[LatticeBox]) -> CompatibilityReport:
    region = box if box is not None else _default_check_region(spec)
    if not spec.system.is_constant and region is None:
        raise _UsageError("table-mode checks need --box (the declared box is too thin)")
    return linear.check_linear_compatibility(spec.system, region)


def cmd_check(args) -> int:
    spec = load_spec(args.spec)
    _box_rank_check(spec, args.box)
    report = _check(spec, args.box)
    sys.stdout.write(dumps(report_to_json(report, spec.kind)))
    return 0 if report.holds else 1


def _solve_point(spec: SpecFile, method: str, t: MultiIndex):
    system, t0, x0 = spec.system, spec.t0, spec.x0
    if method == "step":
        return linear.solve_step(system, t0, x0, t)
    if method == "closed":
        if not system.is_constant:
            raise MethodInapplicable("method 'closed' requires constant coefficients")
        if system.is_homogeneous:
            return linear.eigen_closed_form(system, t0, x0)(t)
        return linear.solve_affine(system, t0, x0, t)
    if method == "fixed-point":
        if not system.is_constant:
            raise MethodInapplicable("method 'fixed-point' requires constant coefficients")
        return linear.solve_affine_fixed_point(system, t0, x0, t)
    if method == "reduction":
        if system.all_invertible is False:
            raise MethodInapplicable("method 'reduction' requires every A_a to be invertible")
        if not leq(t0, t):
            raise MethodInapplicable(f"method 'reduction' requires t >= t0={list(t0.coords)}")
        return monoid.solve_affine_via_reduction(system, t0, x0, t)
    raise _UsageError(f"unknown method {method!r}")


def cmd_solve(args) -> int:
    spec = load_spec(args.spec)
    _rank_check(spec, args.t)
    _box_rank_check(spec, args.box)
    if args.t is None and args.box is None:
        raise _UsageError("solve needs --t or --box")
    if args.check_first:
        report = _check(spec, None)
        if not report.holds:
            sys.stdout.write(dumps(report_to_json(report, spec.kind)))
            return 1
    kind = spec.kind
    if args.box is not None:
        if args.method == "step" and leq(spec.t0, args.box.lo):
            values = solve_region(spec.system.step_family(), spec.t0, spec.x0, args.box)
        else:
            values = {t: _solve_point(spec, args.method, t) for t in args.box.points()}
        out = {"values": [{"t": format_index(t), "x": format_vector(values[t], kind)}
                          for t in args.box.points()]}
    else:
        out = {"t": format_index(args.t), "x": format_vector(_solve_point(spec, args.method, args.t), kind)}
    sys.stdout.write(dumps(out))
    return 0


def cmd_chi(args) -> int:
    spec = load_spec(args.spec)
    _rank_check(spec, args.t, args.s)
    chi = linear.transition(spec.system, args.t, args.s)
    sys.stdout.write(dumps({"t": format_index(args.t), "s": format_index(args.s), "chi": format_matrix(chi)}))
    return 0


def cmd_basis(args) -> int:
    spec = load_spec(args.spec)
    _rank_check(spec, args.t)
    system = spec.system if spec.system.is_homogeneous else spec.system.homogeneous_part()
    basis = linear.solution_basis(system, spec.t0)
    columns = [format_vector(basis.evaluate(j, args.t), spec.kind) for j in range(1, spec.dim + 1)]
    sys.stdout.write(dumps({"t": format_index(args.t), "t0": format_index(spec.t0), "columns": columns}))
    return 0


def cmd_diagonal(args) -> int:
    spec = load_spec(args.spec)
    _rank_check(spec, args.t)
    A = linear.diagonal_reduction(spec.system, args.t)
    sys.stdout.write(dumps({"t": format_index(args.t), "A": format_matrix(A)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multirec",
        description="Check and solve linear multiple recurrences x(t+1_a) = A_a(t) x(t) + b_a(t) on Z^m.",
        epilog="Multi-indices are comma lists (2,1); use --t=-1,0 for negative leading coordinates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify the compatibility conditions")
    p.add_argument("spec")
    p.add_argument("--box", type=parse_box_arg, help="region lo..hi for varying coefficients")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="evaluate the solution through (t0, x0)")
    p.add_argument("spec")
    p.add_argument("--t", type=parse_index_arg, help="target point")
    p.add_argument("--box", type=parse_box_arg, help="evaluate every point of lo..hi")
    p.add_argument("--method", choices=METHODS, default="step")
    p.add_argument("--check-first", action="store_true", help="refuse to solve when compatibility fails")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("chi", help="fundamental matrix chi(t, s)")
    p.add_argument("spec")
    p.add_argument("--t", type=parse_index_arg, required=True)
    p.add_argument("--s", type=parse_index_arg, required=True)
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("basis", help="solution basis from canonical initials, evaluated at t")
    p.add_argument("spec")
    p.add_argument("--t", type=parse_index_arg, required=True)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("diagonal", help="diagonal-step matrix A(t) with x(t+1) = A(t) x(t)")
    p.add_argument("spec")
    p.add_argument("--t", type=parse_index_arg, required=True)
    p.set_defaults(func=cmd_diagonal)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, _UsageError, MixedKinds) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MultirecError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
