"""Multi-index arithmetic on the integer lattice Z^m.

Axes are numbered from 1 to m throughout the package, matching the usual
notation ``1_alpha`` for the unit step along axis ``alpha``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, RankMismatch


@dataclass(frozen=True, order=False)
class MultiIndex:
    coords: tuple[int, ...]

    def __init__(self, coords: Iterable[int]):
        coords = tuple(coords)
        if not coords:
            raise ValueError("a multi-index needs rank >= 1")
        for c in coords:
            if isinstance(c, bool) or not isinstance(c, int):
                raise TypeError(f"lattice coordinates must be integers, got {c!r}")
        object.__setattr__(self, "coords", coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __getitem__(self, axis: int) -> int:
        """Coordinate along ``axis`` (1-based)."""
        if not 1 <= axis <= self.rank:
            raise IndexError(f"axis {axis} out of range 1..{self.rank}")
        return self.coords[axis - 1]

    def __add__(self, other: MultiIndex) -> MultiIndex:
        _same_rank(self, other)
        return MultiIndex(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: MultiIndex) -> MultiIndex:
        _same_rank(self, other)
        return MultiIndex(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> MultiIndex:
        return MultiIndex(-a for a in self.coords)

    def scale(self, k: int) -> MultiIndex:
        return MultiIndex(k * a for a in self.coords)

    def shift(self, axis: int, k: int = 1) -> MultiIndex:
        """``self + k * 1_axis``."""
        if not 1 <= axis <= self.rank:
            raise IndexError(f"axis {axis} out of range 1..{self.rank}")
        c = list(self.coords)
        c[axis - 1] += k
        return MultiIndex(c)

    def replace(self, axis: int, value: int) -> MultiIndex:
        c = list(self.coords)
        c[axis - 1] = value
        return MultiIndex(c)

    def norm1(self) -> int:
        return sum(abs(c) for c in self.coords)

    def to_list(self) -> list[int]:
        return list(self.coords)

    def __repr__(self) -> str:
        return f"MultiIndex({list(self.coords)})"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


def as_index(value) -> MultiIndex:
    """Accept a MultiIndex, a sequence of ints, or a bare int (rank 1)."""
    if isinstance(value, MultiIndex):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return MultiIndex((value,))
    return MultiIndex(value)


def _same_rank(s: MultiIndex, t: MultiIndex) -> None:
    if s.rank != t.rank:
        raise RankMismatch(f"rank mismatch: {s.rank} vs {t.rank}")


def leq(s, t) -> bool:
    """Componentwise order: s <= t iff s^a <= t^a for every axis a."""
    s, t = as_index(s), as_index(t)
    _same_rank(s, t)
    return all(a <= b for a, b in zip(s.coords, t.coords))


def comparable(s, t) -> bool:
    return leq(s, t) or leq(t, s)


def meet(s, t) -> MultiIndex:
    """Componentwise minimum (greatest lower bound)."""
    s, t = as_index(s), as_index(t)
    _same_rank(s, t)
    return MultiIndex(min(a, b) for a, b in zip(s.coords, t.coords))


def join(s, t) -> MultiIndex:
    s, t = as_index(s), as_index(t)
    _same_rank(s, t)
    return MultiIndex(max(a, b) for a, b in zip(s.coords, t.coords))


def zero(m: int) -> MultiIndex:
    return MultiIndex((0,) * m)


def ones(m: int) -> MultiIndex:
    return MultiIndex((1,) * m)


def unit_step(axis: int, m: int) -> MultiIndex:
    if m < 1:
        raise ValueError("rank must be >= 1")
    if not 1 <= axis <= m:
        raise IndexError(f"axis {axis} out of range 1..{m}")
    return MultiIndex(1 if a == axis else 0 for a in range(1, m + 1))


def canonical_path(s, t) -> list[int]:
    """Axis sequence of the canonical monotone path from s up to t.

    Coordinate m is raised first (from base s), then m-1, and so on, with
    axis 1 last. This is the factor order of the transition-matrix
    factorization, so stepping along this path and multiplying the factors
    perform the same products in the same order.
    """
    s, t = as_index(s), as_index(t)
    if not leq(s, t):
        raise DomainError(f"{s} is not <= {t}")
    path: list[int] = []
    for axis in range(s.rank, 0, -1):
        path.extend([axis] * (t[axis] - s[axis]))
    return path


def walk(s, path: Sequence[int]) -> MultiIndex:
    """Replay a sequence of unit steps starting from s."""
    t = as_index(s)
    for axis in path:
        t = t.shift(axis)
    return t


def monotone_paths(s, t) -> Iterator[tuple[int, ...]]:
    """Every monotone lattice path from s to t, as axis sequences.

    The count is the multinomial coefficient of the displacement, so this is
    only meant for small boxes (e.g. displacement (3,2) gives 10 paths).
    """
    s, t = as_index(s), as_index(t)
    if not leq(s, t):
        raise DomainError(f"{s} is not <= {t}")
    d = list((t - s).coords)
    m = len(d)

    def rec(remaining: list[int], prefix: list[int]):
        if not any(remaining):
            yield tuple(prefix)
            return
        for a in range(m):
            if remaining[a]:
                remaining[a] -= 1
                prefix.append(a + 1)
                yield from rec(remaining, prefix)
                prefix.pop()
                remaining[a] += 1

    yield from rec(d, [])


@dataclass(frozen=True)
class LatticeBox:
    """Closed box {t : lo <= t <= hi}."""

    lo: MultiIndex
    hi: MultiIndex

    def __init__(self, lo, hi):
        lo, hi = as_index(lo), as_index(hi)
        if not leq(lo, hi):
            raise ValueError(f"box corners out of order: {lo} !<= {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, t) -> LatticeBox:
        return cls(t, t)

    @property
    def rank(self) -> int:
        return self.lo.rank

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(h - l + 1 for l, h in zip(self.lo.coords, self.hi.coords))

    @property
    def size(self) -> int:
        n = 1
        for k in self.shape:
            n *= k
        return n

    def __contains__(self, t) -> bool:
        t = as_index(t)
        return t.rank == self.rank and leq(self.lo, t) and leq(t, self.hi)

    def points(self) -> Iterator[MultiIndex]:
        """All points in lexicographic order (axis 1 slowest)."""
        ranges = [range(l, h + 1) for l, h in zip(self.lo.coords, self.hi.coords)]
        for c in itertools.product(*ranges):
            yield MultiIndex(c)

    def __iter__(self) -> Iterator[MultiIndex]:
        return self.points()

    def offset(self, t: MultiIndex) -> int:
        """Dense row-major position of t inside the box."""
        if t not in self:
            raise DomainError(f"{t} outside box [{self.lo}, {self.hi}]")
        pos = 0
        for c, l, k in zip(t.coords, self.lo.coords, self.shape):
            pos = pos * k + (c - l)
        return pos

    def shrink_upper(self, k: int = 1) -> LatticeBox:
        return LatticeBox(self.lo, MultiIndex(h - k for h in self.hi.coords))

    def __str__(self) -> str:
        return f"[{self.lo}..{self.hi}]"
