"""Byzantine adversary strategies.

A strategy is a deterministic function of (round, system view, rng stream)
producing per-outgoing-edge values for the trimmed-consensus engine, and a
single per-round value for the broadcast engine (broadcast admits no
equivocation).  Returning no entry for an edge models a missing message;
receivers substitute the scenario's default value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

__all__ = [
    "SystemView",
    "Constant",
    "Crash",
    "RandomUniform",
    "Split",
    "MaxSpread",
    "ADVERSARY_KINDS",
    "adversary_from_config",
]


@dataclass(frozen=True)
class SystemView:
    """What a strategy may inspect: last-round states and who is non-faulty."""

    states: tuple[float, ...]          # previous-round values, index agent-1
    non_faulty: tuple[int, ...]
    initial: tuple[float, ...]

    def state_of(self, agent: int) -> float:
        return self.states[agent - 1]

    def honest_min_max(self) -> tuple[float, float]:
        vals = [self.states[i - 1] for i in self.non_faulty]
        return min(vals), max(vals)


@dataclass(frozen=True)
class Constant:
    """Sends the same fixed value to everyone, every round."""

    value: float

    def edge_messages(self, sender, receivers, round_, view, rng):
        return {r: self.value for r in receivers}

    def broadcast_value(self, sender, round_, view, rng):
        return self.value


@dataclass(frozen=True)
class Crash:
    """Behaves like a frozen-state sender until `after_round`, then goes silent."""

    after_round: int = 0

    def edge_messages(self, sender, receivers, round_, view, rng):
        if round_ > self.after_round:
            return {}
        return {r: view.initial[sender - 1] for r in receivers}

    def broadcast_value(self, sender, round_, view, rng):
        if round_ > self.after_round:
            return None
        return view.initial[sender - 1]


@dataclass(frozen=True)
class RandomUniform:
    """Independent uniform noise per receiver per round (from the run's seed)."""

    lo: float
    hi: float

    def edge_messages(self, sender, receivers, round_, view, rng):
        return {r: float(rng.uniform(self.lo, self.hi)) for r in sorted(receivers)}

    def broadcast_value(self, sender, round_, view, rng):
        return float(rng.uniform(self.lo, self.hi))


@dataclass(frozen=True)
class Split:
    """Equivocates: low value to the lower-id half of receivers, high to the rest.

    Under broadcast (no equivocation possible) it alternates by round parity.
    """

    v_low: float
    v_high: float

    def edge_messages(self, sender, receivers, round_, view, rng):
        ordered = sorted(receivers)
        cut = math.ceil(len(ordered) / 2)
        out = {r: self.v_low for r in ordered[:cut]}
        out.update({r: self.v_high for r in ordered[cut:]})
        return out

    def broadcast_value(self, sender, round_, view, rng):
        return self.v_low if round_ % 2 == 1 else self.v_high


@dataclass(frozen=True)
class MaxSpread:
    """Pulls receivers apart: below-median receivers get an undershoot of the
    honest minimum, the rest an overshoot of the honest maximum."""

    margin: float = 1.0

    def edge_messages(self, sender, receivers, round_, view, rng):
        u, big = view.honest_min_max()
        gap = (big - u) + self.margin
        vals = sorted(view.state_of(r) for r in receivers)
        median = vals[len(vals) // 2]
        return {r: (u - gap if view.state_of(r) <= median else big + gap)
                for r in receivers}

    def broadcast_value(self, sender, round_, view, rng):
        u, big = view.honest_min_max()
        return big + (big - u) + self.margin


ADVERSARY_KINDS = {
    "constant": Constant,
    "crash": Crash,
    "random_uniform": RandomUniform,
    "split": Split,
    "max_spread": MaxSpread,
}


def adversary_from_config(kind: str, params: Mapping | Sequence | None = None):
    if kind not in ADVERSARY_KINDS:
        raise ValueError(
            f"unknown adversary kind {kind!r}; expected one of {sorted(ADVERSARY_KINDS)}")
    params = params or {}
    return ADVERSARY_KINDS[kind](**params)
