"""Admissible scalar convex functions, weighted objectives, and optimum sets.

Admissible means convex, Lipschitz, with a nonempty compact set of minima.
The canonical family is piecewise linear (exact breakpoint-scan argmin);
a smooth kink-free variant exists for the gradient-decoding engine, which
needs differentiability.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "AbsShift",
    "FlatBottom",
    "SmoothAbs",
    "FnCollection",
    "LocalObjective",
    "OptimumSet",
    "RedundancyCase",
    "AdmissibilityError",
    "PiecewiseOnlyError",
    "KINK_RULES",
    "argmin_interval",
    "argmin_interval_grid",
    "classify_redundancy",
    "optimum_set_global",
]

KINK_RULES = ("midpoint", "left", "right")
SLOPE_TOL = 1e-12


class AdmissibilityError(ValueError):
    """Function parameters violate convexity/Lipschitz/compact-argmin rules."""


class PiecewiseOnlyError(TypeError):
    """Exact argmin scan needs piecewise-linear members; use argmin_interval_grid."""


def _pick(lo: float, hi: float, rule: str) -> float:
    if rule == "midpoint":
        return (lo + hi) / 2.0
    if rule == "left":
        return lo
    if rule == "right":
        return hi
    raise ValueError(f"unknown kink rule {rule!r}; expected one of {KINK_RULES}")


@dataclass(frozen=True)
class AbsShift:
    """weight * |x - center|; minimum exactly at the center."""

    center: float
    weight: float = 1.0

    def __post_init__(self) -> None:
        if not (self.weight > 0 and math.isfinite(self.weight)):
            raise AdmissibilityError("AbsShift weight must be positive and finite")
        if not math.isfinite(self.center):
            raise AdmissibilityError("AbsShift center must be finite")

    lipschitz = property(lambda self: self.weight)
    argmin_lo = property(lambda self: self.center)
    argmin_hi = property(lambda self: self.center)
    differentiable = False

    def value(self, x: float) -> float:
        if not math.isfinite(x):
            raise ValueError("non-finite evaluation point")
        return self.weight * abs(x - self.center)

    def subgrad(self, x: float, rule: str = "midpoint") -> float:
        if not math.isfinite(x):
            raise ValueError("non-finite evaluation point")
        if x < self.center:
            return -self.weight
        if x > self.center:
            return self.weight
        return _pick(-self.weight, self.weight, rule)

    def breakpoints(self) -> tuple[float, ...]:
        return (self.center,)


@dataclass(frozen=True)
class FlatBottom:
    """Zero on [lo, hi], linear slopes -slope_left / +slope_right outside."""

    lo: float
    hi: float
    slope_left: float = 1.0
    slope_right: float = 1.0

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise AdmissibilityError("FlatBottom needs lo <= hi")
        if not (self.slope_left > 0 and self.slope_right > 0):
            raise AdmissibilityError(
                "FlatBottom slopes must be positive (compact argmin)")

    lipschitz = property(lambda self: max(self.slope_left, self.slope_right))
    argmin_lo = property(lambda self: self.lo)
    argmin_hi = property(lambda self: self.hi)
    differentiable = False

    def value(self, x: float) -> float:
        if not math.isfinite(x):
            raise ValueError("non-finite evaluation point")
        if x < self.lo:
            return self.slope_left * (self.lo - x)
        if x > self.hi:
            return self.slope_right * (x - self.hi)
        return 0.0

    def subgrad(self, x: float, rule: str = "midpoint") -> float:
        if not math.isfinite(x):
            raise ValueError("non-finite evaluation point")
        if x < self.lo:
            return -self.slope_left
        if x > self.hi:
            return self.slope_right
        if x == self.lo and x == self.hi:
            return _pick(-self.slope_left, self.slope_right, rule)
        if x == self.lo:
            return _pick(-self.slope_left, 0.0, rule)
        if x == self.hi:
            return _pick(0.0, self.slope_right, rule)
        return 0.0

    def breakpoints(self) -> tuple[float, ...]:
        if self.lo == self.hi:
            return (self.lo,)
        return (self.lo, self.hi)


@dataclass(frozen=True)
class SmoothAbs:
    """sqrt((x-center)^2 + smoothing^2) - smoothing: a differentiable |x - c|.

    1-Lipschitz, minimum exactly at the center; the only family accepted by
    the gradient-decoding engine.
    """

    center: float
    smoothing: float = 0.1

    def __post_init__(self) -> None:
        if not (self.smoothing > 0 and math.isfinite(self.smoothing)):
            raise AdmissibilityError("SmoothAbs smoothing must be positive")

    lipschitz = property(lambda self: 1.0)
    argmin_lo = property(lambda self: self.center)
    argmin_hi = property(lambda self: self.center)
    differentiable = True

    def value(self, x: float) -> float:
        if not math.isfinite(x):
            raise ValueError("non-finite evaluation point")
        return math.hypot(x - self.center, self.smoothing) - self.smoothing

    def subgrad(self, x: float, rule: str = "midpoint") -> float:
        if not math.isfinite(x):
            raise ValueError("non-finite evaluation point")
        return (x - self.center) / math.hypot(x - self.center, self.smoothing)

    def breakpoints(self) -> None:
        return None


@dataclass(frozen=True)
class FnCollection:
    """Ordered collection of k admissible input functions."""

    members: tuple

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if not members:
            raise ValueError("a collection needs at least one function")
        object.__setattr__(self, "members", members)

    @property
    def k(self) -> int:
        return len(self.members)

    @property
    def lipschitz(self) -> float:
        return max(m.lipschitz for m in self.members)

    def average_value(self, x: float) -> float:
        return sum(m.value(x) for m in self.members) / self.k

    def average_subgrad(self, x: float, rule: str = "midpoint") -> float:
        return sum(m.subgrad(x, rule) for m in self.members) / self.k

    def sum_value(self, x: float) -> float:
        return sum(m.value(x) for m in self.members)

    def sum_subgrad(self, x: float, rule: str = "midpoint") -> float:
        return sum(m.subgrad(x, rule) for m in self.members)


@dataclass(frozen=True)
class LocalObjective:
    """Convex combination of the collection's members (one agent's objective)."""

    weights: tuple[float, ...]
    collection: FnCollection

    def __post_init__(self) -> None:
        w = tuple(float(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != self.collection.k:
            raise ValueError("weight count must match the collection size")
        if any(v < 0 for v in w):
            raise ValueError("weights must be nonnegative")
        if abs(sum(w) - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")

    def value(self, x: float) -> float:
        return sum(w * m.value(x)
                   for w, m in zip(self.weights, self.collection.members) if w)

    def subgrad(self, x: float, rule: str = "midpoint") -> float:
        return sum(w * m.subgrad(x, rule)
                   for w, m in zip(self.weights, self.collection.members) if w)


# ---------------------------------------------------------------------------
# Exact argmin for weighted piecewise-linear sums
# ---------------------------------------------------------------------------

def argmin_interval(members: Sequence, weights: Sequence[float] | None = None,
                    slope_tol: float = SLOPE_TOL) -> tuple[float, float]:
    """Exact optimum interval of sum_j weights_j * members_j by scanning the
    slope across the merged breakpoint list.

    Only positively-weighted members participate.  Raises PiecewiseOnlyError
    for non-piecewise members (grid fallback: argmin_interval_grid).
    """
    if weights is None:
        weights = [1.0 / len(members)] * len(members)
    active = [(w, m) for w, m in zip(weights, members) if w > 0]
    if not active:
        raise ValueError("at least one member needs positive weight")
    points: set[float] = set()
    for _, m in active:
        bps = m.breakpoints()
        if bps is None:
            raise PiecewiseOnlyError(
                f"{type(m).__name__} has no breakpoint representation; "
                "use argmin_interval_grid for an approximate optimum")
        points.update(bps)
    bps = sorted(points)

    def slope_at(x: float) -> float:
        return sum(w * m.subgrad(x) for w, m in active)

    probes = [bps[0] - 1.0]
    probes += [(a + b) / 2.0 for a, b in zip(bps, bps[1:])]
    probes.append(bps[-1] + 1.0)
    slopes = [slope_at(x) for x in probes]
    if not (slopes[0] < -slope_tol and slopes[-1] > slope_tol):
        raise AdmissibilityError("weighted sum lacks a compact optimum interval")

    lo = next(bps[i - 1] for i, s in enumerate(slopes) if s >= -slope_tol)
    hi = next(bps[i - 1] for i, s in enumerate(slopes) if s > slope_tol)
    return lo, hi


def argmin_interval_grid(value_fn, lo: float, hi: float, steps: int = 4096,
                         rounds: int = 40, flat_tol: float = 1e-12
                         ) -> tuple[float, float]:
    """Approximate optimum interval of a convex function by refined grid scan."""
    for _ in range(rounds):
        xs = [lo + (hi - lo) * i / steps for i in range(steps + 1)]
        vals = [value_fn(x) for x in xs]
        vmin = min(vals)
        idx = [i for i, v in enumerate(vals) if v <= vmin + flat_tol]
        new_lo = xs[max(idx[0] - 1, 0)]
        new_hi = xs[min(idx[-1] + 1, steps)]
        if (new_hi - new_lo) < max(1e-12, 1e-12 * max(abs(new_lo), abs(new_hi))):
            return xs[idx[0]], xs[idx[-1]]
        lo, hi = new_lo, new_hi
    return lo, hi


# ---------------------------------------------------------------------------
# Redundancy classification and the global optimum set
# ---------------------------------------------------------------------------

class RedundancyCase(enum.Enum):
    IDENTICAL_POINT = 1   # all optima are the same single point
    SHARED_OPTIMUM = 2    # optimum intervals intersect
    DISJOINT = 3          # no common optimum


@dataclass(frozen=True)
class OptimumSet:
    """Global optimum interval, or a hull bound when only that is certain."""

    case: RedundancyCase
    lo: float
    hi: float
    exact: bool


def classify_redundancy(collection: FnCollection) -> RedundancyCase:
    intervals = [(m.argmin_lo, m.argmin_hi) for m in collection.members]
    first = intervals[0]
    if first[0] == first[1] and all(iv == first for iv in intervals):
        return RedundancyCase.IDENTICAL_POINT
    lo = max(iv[0] for iv in intervals)
    hi = min(iv[1] for iv in intervals)
    if lo <= hi:
        return RedundancyCase.SHARED_OPTIMUM
    return RedundancyCase.DISJOINT


def optimum_set_global(collection: FnCollection) -> OptimumSet:
    """Optimum set of the average function.

    With a shared optimum this is exactly the intersection of the member
    intervals; otherwise only the convex hull of the member intervals is
    guaranteed to contain it (exact=False flags that the precise interval
    needs an argmin scan on the average).
    """
    case = classify_redundancy(collection)
    intervals = [(m.argmin_lo, m.argmin_hi) for m in collection.members]
    if case is not RedundancyCase.DISJOINT:
        return OptimumSet(case, max(iv[0] for iv in intervals),
                          min(iv[1] for iv in intervals), True)
    return OptimumSet(case, min(iv[0] for iv in intervals),
                      max(iv[1] for iv in intervals), False)


def interval_distance(x: float, lo: float, hi: float) -> float:
    """Distance from a point to a closed interval."""
    if x < lo:
        return lo - x
    if x > hi:
        return x - hi
    return 0.0
