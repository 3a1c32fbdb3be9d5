"""Gradient broadcast, error-correcting decode, and the decoded-descent engine.

Gradients travel over an ideal Byzantine broadcast: every receiver sees the
identical n-vector, with faulty coordinates chosen by the adversary.  The
decoder recovers the k input-function gradients from the n received local
gradients by exact search over error supports of size up to f: for each
candidate support it solves the clean coordinates and accepts on a
vanishing residual.  Capable assignment matrices make the answer unique.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from byzopt.assignment import AssignmentMatrix, decoding_capability
from byzopt.consensus import Scenario, ScenarioError, Trace

__all__ = [
    "BroadcastRound",
    "DecodeResult",
    "DecodeFailure",
    "DecodeReport",
    "Algorithm1Run",
    "byz_broadcast_round",
    "decode",
    "run_algorithm1",
    "centralized_descent",
]

RESIDUAL_RTOL = 1e-9


class DecodeFailure(RuntimeError):
    """No gradient vector is consistent with all but f received coordinates."""

    def __init__(self, message: str, best_residual: float, round_: int | None = None):
        super().__init__(message)
        self.best_residual = best_residual
        self.round = round_


@dataclass(frozen=True)
class BroadcastRound:
    """One broadcast round: the identical vector every non-faulty agent sees."""

    values: tuple[float, ...]


def byz_broadcast_round(honest: Mapping[int, float],
                        adversarial: Mapping[int, float | None],
                        n: int, default_value: float = 0.0) -> BroadcastRound:
    """Assemble the consistent received vector (ideal broadcast primitive).

    A None adversarial value models a silent sender; all receivers then
    substitute the same default.
    """
    values = [0.0] * n
    for i, v in honest.items():
        values[i - 1] = float(v)
    for p, v in adversarial.items():
        values[p - 1] = default_value if v is None else float(v)
    return BroadcastRound(tuple(values))


@dataclass(frozen=True)
class DecodeResult:
    gradients: np.ndarray           # the k recovered input-function gradients
    error_support: frozenset[int]   # 1-based coordinates where y != gradients @ A
    residual_max: float


def _pivot_columns(m: np.ndarray, rtol: float) -> list[int]:
    """First k linearly independent columns by Gaussian elimination."""
    work = np.array(m, dtype=float)
    k, ncols = work.shape
    scale = max(1.0, float(np.abs(work).max(initial=0.0)))
    piv: list[int] = []
    row = 0
    for col in range(ncols):
        if row == k:
            break
        sub = work[row:, col]
        best = int(np.argmax(np.abs(sub)))
        if abs(sub[best]) <= rtol * scale:
            continue
        if best:
            work[[row, row + best]] = work[[row + best, row]]
        below = work[row + 1:, col]
        if below.size:
            work[row + 1:] -= np.outer(below / work[row, col], work[row])
        piv.append(col)
        row += 1
    return piv


def _exact_solve(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Square solve in exact rational arithmetic, rounded once on output.

    Floats are exact binary rationals, so Gaussian elimination over
    Fraction recovers representable solutions bit-exactly; decoding then
    reproduces identically across adversaries and the recovered gradients
    match the honest ones to the last bit on consistent systems.
    """
    k = m.shape[0]
    work = [[Fraction(float(m[r, c])) for c in range(k)] + [Fraction(float(b[r]))]
            for r in range(k)]
    for col in range(k):
        piv = next((r for r in range(col, k) if work[r][col] != 0), None)
        if piv is None:
            raise np.linalg.LinAlgError("singular matrix in exact solve")
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
        for r in range(col + 1, k):
            if work[r][col]:
                ratio = work[r][col] / work[col][col]
                work[r] = [a - ratio * p for a, p in zip(work[r], work[col])]
    x = [Fraction(0)] * k
    for r in range(k - 1, -1, -1):
        acc = work[r][k]
        for c in range(r + 1, k):
            acc -= work[r][c] * x[c]
        x[r] = acc / work[r][r]
    return np.array([float(v) for v in x])


def _solve_from(a: np.ndarray, y: np.ndarray, cols: Sequence[int],
                rtol: float, exact: bool) -> np.ndarray | None:
    """Solve gradients @ a == y on k pivot columns drawn from cols.

    The float path screens candidate supports cheaply; the exact path is
    used once for the returned gradients.
    """
    k = a.shape[0]
    sub = a[:, cols]
    piv = _pivot_columns(sub, rtol)
    if len(piv) < k:
        return None
    chosen = [cols[p] for p in piv]
    if exact:
        return _exact_solve(a[:, chosen].T, y[chosen])
    return np.linalg.solve(a[:, chosen].T, y[chosen])


def decode(y: Sequence[float], a: AssignmentMatrix, f: int,
           rtol: float = RESIDUAL_RTOL) -> DecodeResult:
    """Recover the k gradients agreeing with y on all but at most f coordinates.

    Candidate supports are searched smallest-first in lexicographic order;
    a candidate is accepted when the remaining coordinates are consistent
    (max residual below rtol relative to the data scale).  The returned
    gradients are re-solved from every coordinate that actually matches, so
    two adversaries corrupting the same coordinates decode identically.
    """
    yv = np.asarray(y, dtype=float)
    k, n = a.k, a.n
    if yv.shape != (n,):
        raise ValueError(f"received vector has shape {yv.shape}, expected ({n},)")
    if f < 0:
        raise ValueError("fault bound f must be nonnegative")
    arr = a.entries
    rows = arr.tolist()
    ys = yv.tolist()
    a_scale = max(1.0, float(np.abs(arr).max()))
    scale = max(1.0, float(np.abs(yv).max()))
    best = float("inf")
    for size in range(0, f + 1):
        for support in itertools.combinations(range(n), size):
            clean = [j for j in range(n) if j not in support]
            if len(clean) < k:
                continue
            resid = _screen_residual(arr, rows, yv, ys, clean, k, rtol, a_scale)
            if resid is None:
                continue
            best = min(best, resid)
            if resid <= rtol * scale:
                d = _solve_from(arr, yv, clean, rtol, exact=False)
                result = _refine(arr, yv, d, f, rtol, scale)
                if result is not None:
                    return result
    raise DecodeFailure(
        f"no gradient vector fits n-{f} coordinates (best residual {best:.3e})",
        best)


def _screen_residual(arr, rows, yv, ys, clean, k, rtol, a_scale):
    """Residual of the best fit on the clean coordinates (None if rank-deficient).

    Hand-rolled k=1 and k=2 paths: the support search visits many candidate
    supports and generic linear algebra dominates the runtime otherwise.
    """
    if k == 1:
        row = rows[0]
        pj = next((j for j in clean if abs(row[j]) > rtol * a_scale), None)
        if pj is None:
            return None
        d0 = ys[pj] / row[pj]
        return max(abs(ys[j] - d0 * row[j]) for j in clean)
    if k == 2:
        r0, r1 = rows
        j1 = next((j for j in clean
                   if abs(r0[j]) + abs(r1[j]) > rtol * a_scale), None)
        if j1 is None:
            return None
        det_tol = rtol * a_scale * a_scale
        j2 = next((j for j in clean if j != j1 and
                   abs(r0[j1] * r1[j] - r0[j] * r1[j1]) > det_tol), None)
        if j2 is None:
            return None
        det = r0[j1] * r1[j2] - r0[j2] * r1[j1]
        d0 = (ys[j1] * r1[j2] - ys[j2] * r1[j1]) / det
        d1 = (r0[j1] * ys[j2] - r0[j2] * ys[j1]) / det
        return max(abs(ys[j] - d0 * r0[j] - d1 * r1[j]) for j in clean)
    d = _solve_from(arr, yv, clean, rtol, exact=False)
    if d is None:
        return None
    return float(np.abs(yv[clean] - d @ arr[:, clean]).max())


def _refine(arr: np.ndarray, yv: np.ndarray, d: np.ndarray, f: int,
            rtol: float, scale: float) -> DecodeResult | None:
    """Re-solve from every matching coordinate; None if the final error
    support would exceed f (borderline candidate, keep searching)."""
    mismatch = np.abs(yv - d @ arr) > rtol * scale
    clean = [j for j in range(arr.shape[1]) if not mismatch[j]]
    d2 = _solve_from(arr, yv, clean, rtol, exact=True)
    if d2 is None:
        d2 = d
    final_bad = np.abs(yv - d2 @ arr) > rtol * scale
    if int(final_bad.sum()) > f:
        return None
    support = frozenset(int(j) + 1 for j in np.flatnonzero(final_bad))
    good = ~final_bad
    residual = float(np.abs(yv[good] - d2 @ arr[:, good]).max(initial=0.0))
    return DecodeResult(d2, support, residual)


@dataclass(frozen=True)
class DecodeReport:
    round: int
    support: tuple[int, ...]
    residual: float


@dataclass
class Algorithm1Run:
    trace: Trace
    reports: tuple[DecodeReport, ...]


def run_algorithm1(scenario: Scenario) -> Algorithm1Run:
    """Decoded gradient descent: broadcast, decode, identical update.

    All non-faulty agents start from the same estimate, observe the same
    broadcast vector, decode the same gradients, apply the same update, and
    therefore agree exactly every round.
    """
    problems = scenario.validate()
    if len(set(scenario.x0[i - 1] for i in scenario.non_faulty)) > 1:
        problems.append("non-faulty agents need a common initial estimate (field: x0)")
    for m in scenario.functions.members:
        if not m.differentiable:
            problems.append(
                f"{type(m).__name__} is not differentiable; decoded descent needs "
                "smooth inputs (field: functions)")
            break
    if not scenario.adversarial_demo and not decoding_capability(
            scenario.assignment, scenario.faulty.f):
        problems.append(
            "assignment matrix cannot correct f errors (field: assignment)")
    if problems:
        raise ScenarioError(problems)

    a = scenario.assignment
    arr = a.entries
    n = scenario.graph.n
    T = scenario.rounds
    non_faulty = scenario.non_faulty
    faulty = sorted(scenario.faulty.members)
    rng = np.random.default_rng(scenario.seed)

    states = np.empty((T + 1, n))
    states[0] = scenario.x0
    gradients = np.full((T, n), np.nan)
    all_messages = []
    reports = []
    x = scenario.x0[non_faulty[0] - 1]

    from byzopt.adversaries import SystemView

    for t in range(1, T + 1):
        view = SystemView(tuple(states[t - 1]), non_faulty, scenario.x0)
        d_true = np.array([m.subgrad(x) for m in scenario.functions.members])
        honest = {i: float(arr[:, i - 1] @ d_true) for i in non_faulty}
        adversarial = {p: scenario.adversary.broadcast_value(p, t, view, rng)
                       for p in faulty}
        round_ = byz_broadcast_round(honest, adversarial, n, scenario.default_value)
        try:
            result = decode(round_.values, a, scenario.faulty.f)
        except DecodeFailure as exc:
            raise DecodeFailure(f"round {t}: {exc}", exc.best_residual, t) from exc
        for i in non_faulty:
            gradients[t - 1, i - 1] = honest[i]
        step = float(np.sum(result.gradients))
        x = x - scenario.schedule.alpha(t - 1) * step
        for i in non_faulty:
            states[t, i - 1] = x
        for p in faulty:
            states[t, p - 1] = round_.values[p - 1]
        all_messages.append({(j, i): round_.values[j - 1]
                             for j in range(1, n + 1) for i in non_faulty if j != i})
        reports.append(DecodeReport(t, tuple(sorted(result.error_support)),
                                    result.residual_max))

    trace = Trace(scenario, states, tuple(all_messages),
                  tuple({} for _ in range(T)), gradients)
    return Algorithm1Run(trace, tuple(reports))


def centralized_descent(functions, schedule, x0: float, rounds: int) -> np.ndarray:
    """Plain gradient descent on the sum of the input functions."""
    xs = np.empty(rounds + 1)
    xs[0] = x = float(x0)
    for t in range(1, rounds + 1):
        d = np.array([m.subgrad(x) for m in functions.members])
        x = x - schedule.alpha(t - 1) * float(np.sum(d))
        xs[t] = x
    return xs
