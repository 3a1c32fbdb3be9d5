"""Synchronous-round engine for trimmed-mean consensus with subgradient steps.

Each round every non-faulty agent transmits its estimate on all outgoing
edges, receives one value per incoming edge (missing messages become the
scenario's default value), drops the f smallest and f largest received
values, averages the survivors with its own estimate, and takes a
diminishing-step subgradient step on its local objective.  Faulty agents
send whatever their strategy dictates, possibly different values per edge.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from byzopt.adversaries import SystemView
from byzopt.assignment import AssignmentMatrix, sparsity_by_definition
from byzopt.functions import FnCollection, LocalObjective, interval_distance
from byzopt.graphs import DiGraph, FaultySet, check_condition1
from byzopt.schedules import StepSchedule

__all__ = [
    "Scenario",
    "Trace",
    "Diagnostics",
    "ScenarioError",
    "trimmed_update",
    "run_scenario",
    "diagnostics",
]

log = logging.getLogger(__name__)


class ScenarioError(ValueError):
    """Configuration inconsistencies, reported before round 0."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def trimmed_update(x_self: float, received: Sequence[tuple[int, float]], f: int,
                   d_self: float, alpha: float) -> tuple[float, tuple[int, ...]]:
    """One trimmed-mean update step.

    Sorts received (sender, value) pairs by value with ties broken by sender
    id, drops the f smallest and f largest, and averages the survivors with
    the agent's own value before the subgradient step.  With 2f or fewer
    received values nothing survives and the update degenerates to a pure
    subgradient step.
    """
    if f < 0:
        raise ValueError("fault bound f must be nonnegative")
    ordered = sorted(received, key=lambda sv: (sv[1], sv[0]))
    if len(ordered) <= 2 * f:
        kept: list[tuple[int, float]] = []
    else:
        kept = ordered[f:len(ordered) - f] if f else ordered
    if kept:
        total = x_self
        for _, v in kept:
            total += v
        new_x = total / (len(kept) + 1) - alpha * d_self
    else:
        new_x = x_self - alpha * d_self
    return new_x, tuple(s for s, _ in kept)


@dataclass(frozen=True)
class Scenario:
    """Everything that determines one execution."""

    graph: DiGraph
    faulty: FaultySet
    adversary: object
    assignment: AssignmentMatrix
    functions: FnCollection
    schedule: StepSchedule
    x0: tuple[float, ...]
    rounds: int
    default_value: float = 0.0
    seed: int = 0
    subgrad_rule: str = "midpoint"
    adversarial_demo: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))

    @property
    def non_faulty(self) -> tuple[int, ...]:
        return tuple(v for v in self.graph.vertices if v not in self.faulty.members)

    def local_objective(self, i: int) -> LocalObjective:
        return LocalObjective(tuple(self.assignment.column(i)), self.functions)

    def validate(self) -> list[str]:
        """All configuration problems at once (empty list when consistent)."""
        problems = []
        if self.assignment.n != self.graph.n:
            problems.append(
                f"assignment has {self.assignment.n} columns but the graph has "
                f"{self.graph.n} agents (field: assignment)")
        if self.assignment.k != self.functions.k:
            problems.append(
                f"assignment has {self.assignment.k} rows but the collection has "
                f"{self.functions.k} functions (field: functions)")
        if len(self.x0) != self.graph.n:
            problems.append(
                f"x0 has {len(self.x0)} entries for {self.graph.n} agents (field: x0)")
        if self.rounds < 0:
            problems.append("rounds must be >= 0 (field: rounds)")
        try:
            self.faulty.validate_for(self.graph)
        except ValueError as exc:
            problems.append(f"{exc} (field: faulty)")
        if self.subgrad_rule not in ("midpoint", "left", "right"):
            problems.append(f"unknown subgrad_rule {self.subgrad_rule!r}")
        if not np.isfinite(self.default_value):
            problems.append("default_value must be finite")
        return problems


@dataclass
class Trace:
    """Complete record of one execution.

    states[t, i-1] is agent i's estimate after round t (for faulty agents:
    the nominal value its strategy exposed, display only).  messages[t-1]
    maps (sender, receiver) to the value sent in round t; absent keys are
    messages never sent.  trims[t-1][i] lists the senders agent i kept.
    gradients[t, i-1] is the subgradient agent i used when computing
    states[t+1], so states(t+1) = mix(states(t)) - alpha(t) * gradients(t).
    """

    scenario: Scenario
    states: np.ndarray
    messages: tuple
    trims: tuple
    gradients: np.ndarray
    degenerate_rounds: tuple = ()

    @property
    def rounds(self) -> int:
        return self.states.shape[0] - 1


def run_scenario(scenario: Scenario) -> Trace:
    """Execute the scenario deterministically (same seed, same trace)."""
    problems = scenario.validate()
    if problems:
        raise ScenarioError(problems)
    if not scenario.adversarial_demo:
        sp = sparsity_by_definition(scenario.assignment).value
        try:
            verdict = check_condition1(scenario.graph, scenario.faulty.f, sp)
        except Exception as exc:
            raise ScenarioError([
                f"could not verify the source-component condition ({exc}); "
                "set adversarial_demo=True to skip the check"]) from exc
        if not verdict.holds:
            raise ScenarioError([
                "graph fails the source-component condition for this fault bound "
                "and assignment sparsity; set adversarial_demo=True to run anyway"])

    g = scenario.graph
    n = g.n
    T = scenario.rounds
    f = scenario.faulty.f
    default = scenario.default_value
    rule = scenario.subgrad_rule
    non_faulty = scenario.non_faulty
    faulty = sorted(scenario.faulty.members)
    rng = np.random.default_rng(scenario.seed)

    in_nbrs = {i: sorted(g.in_neighbors(i)) for i in non_faulty}
    out_nbrs = {p: sorted(g.out_neighbors(p)) for p in faulty}
    objectives = {i: scenario.local_objective(i) for i in non_faulty}

    states = np.empty((T + 1, n))
    states[0] = scenario.x0
    gradients = np.full((T, n), np.nan)
    all_messages = []
    all_trims = []
    degenerate = []

    prev = list(scenario.x0)
    for t in range(1, T + 1):
        view = SystemView(tuple(prev), non_faulty, scenario.x0)
        msgs: dict[tuple[int, int], float] = {}
        for p in faulty:
            sent = scenario.adversary.edge_messages(p, out_nbrs[p], t, view, rng)
            for r, v in sent.items():
                msgs[(p, r)] = float(v)
        for i in non_faulty:
            xi = prev[i - 1]
            for j in sorted(g.out_neighbors(i)):
                msgs[(i, j)] = xi

        trims: dict[int, tuple[int, ...]] = {}
        nxt = list(prev)
        for i in non_faulty:
            received = [(j, msgs[(j, i)]) if (j, i) in msgs else (j, default)
                        for j in in_nbrs[i]]
            d = objectives[i].subgrad(prev[i - 1], rule)
            gradients[t - 1, i - 1] = d
            new_x, kept = trimmed_update(prev[i - 1], received, f, d,
                                         scenario.schedule.alpha(t - 1))
            if not kept and received:
                degenerate.append((t, i))
                log.debug("round %d: agent %d kept no values (|in| <= 2f)", t, i)
            nxt[i - 1] = new_x
            trims[i] = kept
        for p in faulty:
            sent_vals = [msgs[(p, r)] for r in out_nbrs[p] if (p, r) in msgs]
            nxt[p - 1] = sent_vals[0] if sent_vals else float("nan")

        states[t] = nxt
        all_messages.append(msgs)
        all_trims.append(trims)
        prev = nxt

    return Trace(scenario, states, tuple(all_messages), tuple(all_trims),
                 gradients, tuple(degenerate))


@dataclass(frozen=True)
class Diagnostics:
    spread: np.ndarray
    dist_to_optimum: np.ndarray
    in_optimum: bool


def diagnostics(trace: Trace, lo: float, hi: float) -> Diagnostics:
    """Per-round disagreement and distance to the target interval [lo, hi]."""
    idx = [i - 1 for i in trace.scenario.non_faulty]
    nf = trace.states[:, idx]
    spread = nf.max(axis=1) - nf.min(axis=1)
    dist = np.array([max(interval_distance(float(x), lo, hi) for x in row)
                     for row in nf])
    return Diagnostics(spread, dist, bool(dist[-1] == 0.0))
