"""Scalar kinds: exact rationals, real floats and complex floats.

Rationals are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator); real and complex scalars are Python ``float`` and
``complex``.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction

RATIONAL = "rational"
REAL = "real"
COMPLEX = "complex"
KINDS = (RATIONAL, REAL, COMPLEX)


class MixedKinds(TypeError):
    pass


@dataclass(frozen=True)
class Tolerance:
    """Float comparison policy.

    ``rel``: entries a, b are equal when |a-b| <= rel * max(1, |a|, |b|).
    ``pivot``: a Gauss-Jordan pivot is treated as zero below pivot * max|entry|.
    ``cluster``: float eigenvalues closer than cluster * max(1, |lambda|) are merged.
    ``null``: singular values below null * max(1, sigma_max) span a null space.
    """

    rel: float = 1e-9
    pivot: float = 1e-12
    cluster: float = 1e-6
    null: float = 1e-8

    def close(self, a, b) -> bool:
        return abs(a - b) <= self.rel * max(1.0, abs(a), abs(b))


DEFAULT_TOLERANCE = Tolerance()


def check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown scalar kind {kind!r}; expected one of {KINDS}")
    return kind


def kind_of(value) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        return RATIONAL
    if isinstance(value, float):
        return REAL
    if isinstance(value, complex):
        return COMPLEX
    raise TypeError(f"not a scalar: {value!r}")


def infer_kind(values) -> str:
    """Widest kind among the values (rational < real < complex)."""
    kinds = {kind_of(v) for v in values}
    if COMPLEX in kinds:
        return COMPLEX
    if REAL in kinds:
        return REAL
    return RATIONAL


def coerce(value, kind: str):
    """Convert value into the representation of ``kind``.

    Rational kind refuses floats: a binary float carries no exact rational
    meaning the caller intended.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if kind == RATIONAL:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value.strip())
        raise MixedKinds(f"cannot use {value!r} as an exact rational")
    if kind == REAL:
        if isinstance(value, complex):
            raise MixedKinds(f"complex value {value!r} in a real matrix")
        if isinstance(value, numbers.Real):
            return float(value)
        if isinstance(value, str):
            return float(Fraction(value.strip()))
        raise MixedKinds(f"cannot use {value!r} as a real float")
    if kind == COMPLEX:
        if isinstance(value, numbers.Complex):
            return complex(value)
        if isinstance(value, str):
            return complex(float(Fraction(value.strip())))
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        raise MixedKinds(f"cannot use {value!r} as a complex float")
    raise ValueError(f"unknown scalar kind {kind!r}")


def zero_of(kind: str):
    return coerce(0, kind)


def one_of(kind: str):
    return coerce(1, kind)


def is_zero(x, kind: str, tol: Tolerance = DEFAULT_TOLERANCE, scale: float = 1.0) -> bool:
    if kind == RATIONAL:
        return x == 0
    return abs(x) <= tol.pivot * max(1.0, scale)


def equal(a, b, kind: str, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    if kind == RATIONAL:
        return a == b
    return tol.close(a, b)


def format_scalar(x, kind: str):
    """JSON-ready form: "p/q" strings, plain floats, or [re, im] pairs."""
    if kind == RATIONAL:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if kind == REAL:
        return float(x)
    x = complex(x)
    return [x.real, x.imag]


def parse_scalar(obj, kind: str):
    if kind == RATIONAL:
        if isinstance(obj, float):
            raise MixedKinds(f"rational scalars must be strings or integers, got {obj!r}")
        return coerce(obj, RATIONAL)
    if kind == REAL:
        if isinstance(obj, (list, tuple)):
            raise MixedKinds(f"real scalar expected, got {obj!r}")
        return coerce(obj, REAL)
    return coerce(obj, COMPLEX)
