"""Generic engine for x(t + 1_a) = F_a(t, x(t)) over an arbitrary state set."""
from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Any, Callable, Generic, Iterable, Optional, Sequence, TypeVar

from .errors import DomainError, MissingInverse, RankMismatch
from .lattice import LatticeBox, MultiIndex, as_index, canonical_path, leq, meet

State = TypeVar("State")
Step = Callable[[MultiIndex, Any], Any]


@dataclass(frozen=True)
class StepFamily(Generic[State]):
    """m step maps F_a(t, x), optionally with inverses.

    ``inverse_steps[a](t, steps[a](t, x)) == x`` is expected whenever inverses
    are given. ``domain_floor`` restricts the steps to t >= floor; ``equal``
    decides state equality when looking for compatibility violations.
    """

    steps: Sequence[Step]
    inverse_steps: Optional[Sequence[Step]] = None
    domain_floor: Optional[MultiIndex] = None
    equal: Callable[[Any, Any], bool] = operator.eq

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError("a step family needs at least one axis")
        if self.inverse_steps is not None:
            object.__setattr__(self, "inverse_steps", tuple(self.inverse_steps))
            if len(self.inverse_steps) != len(self.steps):
                raise RankMismatch("inverse_steps must have one map per axis")
        if self.domain_floor is not None:
            floor = as_index(self.domain_floor)
            if floor.rank != len(self.steps):
                raise RankMismatch("domain_floor rank differs from number of steps")
            object.__setattr__(self, "domain_floor", floor)

    @property
    def rank(self) -> int:
        return len(self.steps)

    @property
    def invertible(self) -> bool:
        return self.inverse_steps is not None

    def _check_domain(self, t: MultiIndex) -> None:
        if t.rank != self.rank:
            raise RankMismatch(f"point {t} has rank {t.rank}, family has rank {self.rank}")
        if self.domain_floor is not None and not leq(self.domain_floor, t):
            raise DomainError(f"{t} lies below the domain floor {self.domain_floor}")

    def forward(self, axis: int, t: MultiIndex, x):
        """x(t + 1_axis) from x(t)."""
        self._check_domain(t)
        return self.steps[axis - 1](t, x)

    def backward(self, axis: int, t: MultiIndex, x):
        """x(t - 1_axis) from x(t), using the inverse step based at t - 1_axis."""
        if self.inverse_steps is None:
            raise MissingInverse("this step family has no inverse steps")
        base = t.shift(axis, -1)
        self._check_domain(base)
        return self.inverse_steps[axis - 1](base, x)


@dataclass(frozen=True)
class Witness:
    alpha: int
    beta: int
    t: MultiIndex
    x: Any
    left: Any
    right: Any
    condition: str = "step"


@dataclass(frozen=True)
class CompatibilityReport:
    """Outcome of a finite compatibility check.

    A passing report only certifies the conditions on ``region`` (and the
    sampled states, where applicable).
    """

    witnesses: tuple[Witness, ...] = ()
    region: Optional[LatticeBox] = None
    checked: int = 0
    note: str = ""

    @property
    def holds(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.holds


def check_compatibility(family: StepFamily, region: LatticeBox, states: Iterable) -> CompatibilityReport:
    """Evaluate F_a(t+1_b, F_b(t,x)) against F_b(t+1_a, F_a(t,x)) on a finite sample."""
    states = list(states)
    if not states:
        raise ValueError("compatibility check needs at least one sample state")
    if region.rank != family.rank:
        raise RankMismatch("region rank differs from the step family rank")
    if family.domain_floor is not None and not leq(family.domain_floor, region.lo):
        raise DomainError(f"region {region} extends below the domain floor {family.domain_floor}")

    witnesses = []
    checked = 0
    m = family.rank
    for t in region.points():
        for x in states:
            for a in range(1, m + 1):
                for b in range(a + 1, m + 1):
                    left = family.forward(a, t.shift(b), family.forward(b, t, x))
                    right = family.forward(b, t.shift(a), family.forward(a, t, x))
                    checked += 1
                    if not family.equal(left, right):
                        witnesses.append(Witness(a, b, t, x, left, right))
    return CompatibilityReport(tuple(witnesses), region, checked)


def step_along(family: StepFamily, start: MultiIndex, x, path: Sequence[int]):
    """Apply forward steps along an explicit axis sequence."""
    t = start
    for axis in path:
        x = family.forward(axis, t, x)
        t = t.shift(axis)
    return x


def solve_forward(family: StepFamily, t0, x0, t):
    """Value at t of the solution through (t0, x0), stepping along the canonical path.

    Points not above t0 are delegated to :func:`solve_bidirectional`, which
    needs inverse steps.
    """
    t0, t = as_index(t0), as_index(t)
    if t0.rank != family.rank or t.rank != family.rank:
        raise RankMismatch("rank of t0/t differs from the step family rank")
    if not leq(t0, t):
        if not family.invertible:
            raise DomainError(f"{t} is not >= {t0} and the steps have no inverses")
        return solve_bidirectional(family, t0, x0, t)
    return step_along(family, t0, x0, canonical_path(t0, t))


def _last_axis(t0: MultiIndex, t: MultiIndex) -> int:
    # canonical path ends with its lowest raised axis
    for axis in range(1, t.rank + 1):
        if t[axis] > t0[axis]:
            return axis
    return 0


def solve_region(family: StepFamily, t0, x0, region: LatticeBox) -> dict:
    """Fill a box with solution values, each computed once from a stored predecessor.

    The predecessor of t is t - 1_a with a the last axis of the canonical path
    from t0 to t, so every stored value is produced by exactly the operations
    :func:`solve_forward` would perform.
    """
    t0 = as_index(t0)
    if not leq(t0, region.lo):
        raise DomainError(f"region {region} is not above t0={t0}")
    table: list = [None] * region.size
    out = {}
    for t in region.points():
        axis = _last_axis(t0, t)
        if axis == 0:
            x = x0
        else:
            prev = t.shift(axis, -1)
            if prev in region:
                x = family.forward(axis, prev, table[region.offset(prev)])
            else:
                x = solve_forward(family, t0, x0, t)
        table[region.offset(t)] = x
        out[t] = x
    return out


def solve_bidirectional(family: StepFamily, t0, x0, t):
    """Solution value at an arbitrary t when every step is invertible on Z^m.

    Descends from t0 to meet(t0, t) by undoing the canonical path from the
    meet to t0 (axis 1 first), then climbs along the canonical path to t.
    For t >= t0 the descent is empty and this matches :func:`solve_forward`.
    """
    if not family.invertible:
        raise MissingInverse("bidirectional solution needs inverse steps")
    if family.domain_floor is not None:
        raise DomainError("bidirectional solution needs steps defined on all of Z^m")
    t0, t = as_index(t0), as_index(t)
    low = meet(t0, t)
    x = x0
    here = t0
    for axis in reversed(canonical_path(low, t0)):
        x = family.backward(axis, here, x)
        here = here.shift(axis, -1)
    return step_along(family, low, x, canonical_path(low, t))
