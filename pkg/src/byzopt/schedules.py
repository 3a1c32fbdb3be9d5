"""Diminishing step-size schedules.

Every provided kind is positive, non-increasing, with divergent sum and
convergent sum of squares (a/(t+1)^p needs 0.5 < p <= 1); the constraints
are enforced per kind at construction.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["StepSchedule", "harmonic", "power"]


@dataclass(frozen=True)
class StepSchedule:
    kind: str
    a: float
    p: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("harmonic", "power"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if not self.a > 0:
            raise ValueError("schedule scale a must be positive")
        if self.kind == "harmonic" and self.p != 1.0:
            raise ValueError("harmonic schedule fixes p = 1")
        if not 0.5 < self.p <= 1.0:
            raise ValueError(
                "power schedule needs 0.5 < p <= 1 for a divergent sum with "
                "convergent sum of squares")

    def alpha(self, t: int) -> float:
        if t < 0:
            raise ValueError("schedule index must be >= 0")
        return self.a / (t + 1) ** self.p


def harmonic(a: float = 1.0) -> StepSchedule:
    return StepSchedule("harmonic", a)


def power(a: float, p: float) -> StepSchedule:
    return StepSchedule("power", a, p)
