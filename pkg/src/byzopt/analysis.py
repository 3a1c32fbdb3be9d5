"""Transition-matrix reconstruction and convergence diagnostics.

A completed trimmed-consensus trace evolves, over the non-faulty agents, as

    x(t+1) = M(t) x(t) - alpha(t) d(t)

for a row-stochastic M(t) whose rows mirror each agent's trim: the self
weight and each kept non-faulty sender get 1/(m+1); a kept faulty value is
re-expressed as a convex combination of the nearest non-faulty values
trimmed below and above it (such brackets always exist, because at most f
of the f values trimmed on each side can be faulty... with one of them kept).

From the reconstructed M(t) this module forms backward products, estimates
their common row limit, and verifies the geometric-rate, column-mass, and
consensus-distance bounds numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from byzopt.assignment import sparsity_by_definition
from byzopt.consensus import Trace
from byzopt.graphs import FaultySet, ReducedGraph, enumerate_reduced_graphs

__all__ = [
    "TransitionRecord",
    "ProductRecord",
    "AnalysisError",
    "AnalysisScopeError",
    "CheckReport",
    "build_M",
    "build_transition_record",
    "reconstruction_residuals",
    "matrix_properties",
    "find_reduced_witness",
    "phi_product",
    "estimate_pi",
    "build_product_record",
    "check_lemma_lb",
    "check_rate",
    "check_pi_lower",
    "y_sequence",
    "check_uub",
    "check_basic_iter",
    "supermartingale_terms",
]

ENTRY_TOL = 1e-12
PI_CONVERGENCE_DIAMETER = 1e-9


class AnalysisError(RuntimeError):
    """A structural assumption about the trace failed (with round data)."""


class AnalysisScopeError(ValueError):
    """Mixing diagnostics are capped at n <= 6, f <= 1 (tau grows fast)."""


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one numeric check; passed is None when inconclusive."""

    name: str
    passed: bool | None
    detail: dict

    def __bool__(self) -> bool:
        return bool(self.passed)


# ---------------------------------------------------------------------------
# M(t) reconstruction
# ---------------------------------------------------------------------------

def _bracket_owners(candidates, pick_largest):
    """Owner of the largest (or smallest) non-faulty value; ties to lowest id."""
    if not candidates:
        return None
    if pick_largest:
        value = max(v for _, v in candidates)
    else:
        value = min(v for _, v in candidates)
    owner = min(s for s, v in candidates if v == value)
    return owner, value


def build_M(trace: Trace, t: int) -> np.ndarray:
    """Row-stochastic matrix over non-faulty agents with x(t+1) = M(t)x(t) - a(t)d(t)."""
    s = trace.scenario
    if not 0 <= t < trace.rounds:
        raise ValueError(f"round index {t} outside 0..{trace.rounds - 1}")
    non_faulty = s.non_faulty
    idx = {agent: pos for pos, agent in enumerate(non_faulty)}
    faulty = s.faulty.members
    f = s.faulty.f
    msgs = trace.messages[t]
    trims = trace.trims[t]
    m_dim = len(non_faulty)
    mat = np.zeros((m_dim, m_dim))

    for i in non_faulty:
        row = mat[idx[i]]
        kept = trims[i]
        a_i = 1.0 / (len(kept) + 1)
        row[idx[i]] = a_i
        if not kept:
            continue
        received = [(j, msgs[(j, i)]) if (j, i) in msgs else (j, s.default_value)
                    for j in sorted(s.graph.in_neighbors(i))]
        ordered = sorted(received, key=lambda sv: (sv[1], sv[0]))
        below = ordered[:f]
        above = ordered[len(ordered) - f:] if f else []
        lo = _bracket_owners([(j, v) for j, v in below if j not in faulty], True)
        hi = _bracket_owners([(j, v) for j, v in above if j not in faulty], False)
        for j in kept:
            if j not in faulty:
                row[idx[j]] += a_i
                continue
            w_p = msgs[(j, i)] if (j, i) in msgs else s.default_value
            if lo is None or hi is None:
                raise AnalysisError(
                    f"round {t + 1}, agent {i}: kept faulty value {w_p} has no "
                    f"non-faulty bracket (below={below}, above={above})")
            (lo_owner, w_lo), (hi_owner, w_hi) = lo, hi
            if not w_lo <= w_p <= w_hi:
                raise AnalysisError(
                    f"round {t + 1}, agent {i}: kept faulty value {w_p} outside "
                    f"bracket [{w_lo}, {w_hi}]")
            if w_hi == w_lo:
                row[idx[min(lo_owner, hi_owner)]] += a_i
            else:
                lam = (w_hi - w_p) / (w_hi - w_lo)
                row[idx[lo_owner]] += a_i * lam
                row[idx[hi_owner]] += a_i * (1.0 - lam)
    return mat


@dataclass
class TransitionRecord:
    """All per-round transition matrices of one trace, with the empirical beta."""

    trace: Trace
    non_faulty: tuple[int, ...]
    matrices: np.ndarray      # (T, m, m)
    alphas: np.ndarray        # (T,)
    gradients: np.ndarray     # (T, m): d(t) over non-faulty agents
    states: np.ndarray        # (T+1, m)
    beta: float               # min positive entry across all rounds

    @property
    def rounds(self) -> int:
        return self.matrices.shape[0]

    @property
    def dim(self) -> int:
        return len(self.non_faulty)


def build_transition_record(trace: Trace) -> TransitionRecord:
    s = trace.scenario
    non_faulty = s.non_faulty
    cols = [i - 1 for i in non_faulty]
    T = trace.rounds
    mats = np.empty((T, len(cols), len(cols)))
    for t in range(T):
        mats[t] = build_M(trace, t)
    positive = mats[mats > 0]
    beta = float(positive.min()) if positive.size else 0.0
    alphas = np.array([s.schedule.alpha(t) for t in range(T)])
    return TransitionRecord(trace, non_faulty, mats, alphas,
                            trace.gradients[:, cols], trace.states[:, cols], beta)


def reconstruction_residuals(record: TransitionRecord) -> np.ndarray:
    """Per-round max |x(t+1) - (M(t) x(t) - alpha(t) d(t))|."""
    out = np.empty(record.rounds)
    for t in range(record.rounds):
        predicted = record.matrices[t] @ record.states[t] \
            - record.alphas[t] * record.gradients[t]
        out[t] = np.abs(record.states[t + 1] - predicted).max()
    return out


def matrix_properties(record: TransitionRecord) -> CheckReport:
    """Row-stochasticity, self weights, support, and per-row beta mass."""
    s = record.trace.scenario
    faulty = s.faulty.members
    f = s.faulty.f
    idx = {agent: pos for pos, agent in enumerate(record.non_faulty)}
    mats = record.matrices
    row_sums_ok = bool(np.all(np.abs(mats.sum(axis=2) - 1.0) <= ENTRY_TOL))
    nonneg_ok = bool(np.all(mats >= 0.0))

    diag_ok = True
    for t in range(record.rounds):
        for i in record.non_faulty:
            a_i = 1.0 / (len(record.trace.trims[t][i]) + 1)
            if mats[t, idx[i], idx[i]] != a_i:
                diag_ok = False

    allowed = np.zeros((record.dim, record.dim), dtype=bool)
    for pos, i in enumerate(record.non_faulty):
        allowed[pos, pos] = True
        for j in s.graph.in_neighbors(i):
            if j not in faulty:
                allowed[pos, idx[j]] = True
    support_ok = bool(np.all(mats[:, ~allowed] == 0.0))

    beta_rows_ok = True
    worst = None
    for pos, i in enumerate(record.non_faulty):
        needed = len(s.graph.in_neighbors(i) - faulty) - f + 1
        counts = (mats[:, pos, :] >= record.beta - ENTRY_TOL).sum(axis=1)
        if counts.min() < needed:
            beta_rows_ok = False
            worst = {"agent": i, "needed": needed, "count": int(counts.min())}
    passed = row_sums_ok and nonneg_ok and diag_ok and support_ok and beta_rows_ok
    return CheckReport("matrix_properties", passed, {
        "row_stochastic": row_sums_ok,
        "nonnegative": nonneg_ok,
        "self_weight_matches_trim": diag_ok,
        "support_within_edges": support_ok,
        "beta_row_mass": beta_rows_ok,
        "beta": record.beta,
        "beta_row_worst": worst,
    })


def find_reduced_witness(mat: np.ndarray, beta: float, graph, faulty: FaultySet,
                         non_faulty: tuple[int, ...],
                         tol: float = ENTRY_TOL) -> ReducedGraph | None:
    """First reduced graph H (deterministic order) with M >= beta * (H + I)."""
    idx = {agent: pos for pos, agent in enumerate(non_faulty)}
    if any(mat[idx[i], idx[i]] < beta - tol for i in non_faulty):
        return None
    for h in enumerate_reduced_graphs(graph, faulty):
        if all(mat[idx[i], idx[j]] >= beta - tol for (j, i) in h.edges):
            return h
    return None


# ---------------------------------------------------------------------------
# Backward products and their row limits
# ---------------------------------------------------------------------------

def phi_product(record: TransitionRecord, t: int, r: int) -> np.ndarray:
    """M(t) M(t-1) ... M(r); the identity when r = t+1."""
    if not 0 <= r <= t + 1 or t >= record.rounds:
        raise ValueError(f"need 0 <= r <= t+1 <= rounds, got t={t}, r={r}")
    out = np.eye(record.dim)
    for s in range(t, r - 1, -1):
        out = out @ record.matrices[s]
    return out


def estimate_pi(record: TransitionRecord, r: int, horizon: int
                ) -> tuple[np.ndarray, float]:
    """Row-average of the backward product up to `horizon`, with the row
    disagreement diameter (converged when the diameter is below 1e-9)."""
    phi = phi_product(record, horizon, r)
    diameter = float((phi.max(axis=0) - phi.min(axis=0)).max())
    return phi.mean(axis=0), diameter


@dataclass
class ProductRecord:
    """Mixing metadata and cached row-limit estimates for one record."""

    record: TransitionRecord
    tau: int
    nu: int
    beta: float
    gamma: float
    sp: int
    horizon: int
    pi: dict
    pi_diameter: dict

    def pi_converged(self, r: int) -> bool:
        return r in self.pi and self.pi_diameter[r] < PI_CONVERGENCE_DIAMETER


def build_product_record(record: TransitionRecord, pi_max_r: int,
                         horizon: int | None = None) -> ProductRecord:
    """Enumerate the reduced-graph count, fix nu and gamma, and estimate the
    row limits pi(r) for r <= pi_max_r in one backward sweep."""
    s = record.trace.scenario
    if s.graph.n > 6 or s.faulty.f > 1:
        raise AnalysisScopeError(
            "mixing diagnostics are capped at n <= 6 and f <= 1: the "
            "reduced-graph count tau enters nu = tau * (n - phi) and explodes")
    tau = len(enumerate_reduced_graphs(s.graph, s.faulty))
    m = record.dim
    nu = tau * m
    beta = record.beta
    log_beta_nu = nu * math.log(beta) if beta > 0 else float("-inf")
    beta_nu = math.exp(log_beta_nu) if log_beta_nu > -745 else 0.0
    gamma = 1.0 - beta_nu
    if horizon is None:
        horizon = record.rounds - 1
    horizon = min(horizon, record.rounds - 1)
    pi: dict[int, np.ndarray] = {}
    diam: dict[int, float] = {}
    phi = None
    for r in range(horizon, -1, -1):
        phi = record.matrices[horizon] if phi is None else phi @ record.matrices[r]
        if r <= pi_max_r:
            pi[r] = phi.mean(axis=0)
            diam[r] = float((phi.max(axis=0) - phi.min(axis=0)).max())
    sp = sparsity_by_definition(s.assignment).value
    return ProductRecord(record, tau, nu, beta, gamma, sp, horizon, pi, diam)


def _beta_nu(product: ProductRecord) -> float:
    if product.beta <= 0:
        return 0.0
    log_val = product.nu * math.log(product.beta)
    return math.exp(log_val) if log_val > -745 else 0.0


def check_lemma_lb(product: ProductRecord, r: int) -> CheckReport:
    """Columns of the nu-step product uniformly above beta^nu must number at
    least max{sp, f+1}."""
    record = product.record
    top = r + product.nu - 1
    if top >= record.rounds:
        return CheckReport("lemma_lb", None, {
            "reason": "insufficient horizon",
            "needed_rounds": top + 1,
            "available": record.rounds,
        })
    phi = phi_product(record, top, r)
    threshold = _beta_nu(product)
    qualifying = int(np.sum(phi.min(axis=0) >= threshold))
    needed = max(product.sp, record.trace.scenario.faulty.f + 1)
    return CheckReport("lemma_lb", qualifying >= needed, {
        "r": r, "columns": qualifying, "needed": needed,
        "threshold": threshold,
    })


def check_rate(product: ProductRecord, t: int, r: int,
               tol: float = 1e-9) -> CheckReport:
    """|phi_ij(t, r) - pi_j(r)| <= gamma^ceil((t-r+1)/nu) elementwise."""
    if not product.pi_converged(r):
        return CheckReport("rate", None, {
            "reason": "pi not converged",
            "r": r,
            "diameter": product.pi_diameter.get(r),
        })
    phi = phi_product(product.record, t, r)
    dev = float(np.abs(phi - product.pi[r]).max())
    bound = product.gamma ** math.ceil((t - r + 1) / product.nu)
    return CheckReport("rate", dev <= bound + tol, {
        "t": t, "r": r, "deviation": dev, "bound": bound,
        "margin": bound + tol - dev,
    })


def check_pi_lower(product: ProductRecord, r: int) -> CheckReport:
    """Some index set of size >= max{sp, f+1} has pi_i(r) >= beta^nu."""
    if not product.pi_converged(r):
        return CheckReport("pi_lower", None, {
            "reason": "pi not converged", "r": r,
            "diameter": product.pi_diameter.get(r),
        })
    threshold = _beta_nu(product) - 1e-12
    count = int(np.sum(product.pi[r] >= threshold))
    needed = max(product.sp, product.record.trace.scenario.faulty.f + 1)
    return CheckReport("pi_lower", count >= needed, {
        "r": r, "count": count, "needed": needed, "threshold": threshold,
    })


# ---------------------------------------------------------------------------
# The frozen-subgradient consensus value y(t)
# ---------------------------------------------------------------------------

def y_sequence(product: ProductRecord, t_max: int) -> tuple[np.ndarray, float]:
    """y(t) for t <= t_max, plus the worst recurrence deviation.

    y(t) is the value the system would settle on if all agents froze their
    subgradients after round t; it must satisfy the one-step recurrence
    y(t+1) = y(t) - alpha(t) <pi(t+1), d(t)>.
    """
    record = product.record
    for r in range(t_max + 1):
        if not product.pi_converged(r):
            raise AnalysisError(
                f"pi({r}) not converged (diameter "
                f"{product.pi_diameter.get(r)}); extend the horizon")
    y = np.empty(t_max + 1)
    y[0] = float(product.pi[0] @ record.states[0])
    for t in range(1, t_max + 1):
        y[t] = y[t - 1] - record.alphas[t - 1] * float(
            product.pi[t] @ record.gradients[t - 1])
    # independent accumulation of the closed form, worst deviation
    worst = 0.0
    for t in range(1, t_max + 1):
        terms = [float(product.pi[0] @ record.states[0])]
        terms += [-record.alphas[r - 1] * float(product.pi[r] @ record.gradients[r - 1])
                  for r in range(1, t + 1)]
        worst = max(worst, abs(math.fsum(terms) - y[t]))
    return y, worst


def uub_bound(product: ProductRecord, t: int) -> float:
    """Eq.-style uniform bound on |y(t) - x_i(t)| for t >= 1."""
    record = product.record
    s = record.trace.scenario
    m = record.dim
    L = s.functions.lipschitz
    x0 = record.states[0]
    big = max(abs(float(x0.min())), abs(float(x0.max())))
    nu, gamma = product.nu, product.gamma
    term1 = m * big * gamma ** math.ceil(t / nu)
    term2 = m * L * math.fsum(
        record.alphas[r - 1] * gamma ** math.ceil((t - r) / nu)
        for r in range(1, t))
    term3 = 2.0 * record.alphas[t - 1] * L
    return float(term1 + term2 + term3)


def check_uub(product: ProductRecord, y: np.ndarray, t: int,
              tol: float = 1e-9) -> CheckReport:
    """max_i |y(t) - x_i(t)| against the uniform bound."""
    if not 1 <= t < len(y):
        raise ValueError(f"need 1 <= t <= {len(y) - 1}, got {t}")
    record = product.record
    lhs = float(np.abs(y[t] - record.states[t]).max())
    bound = uub_bound(product, t)
    return CheckReport("uub", lhs <= bound + tol * max(1.0, bound), {
        "t": t, "lhs": lhs, "bound": bound,
    })


def check_basic_iter(product: ProductRecord, y: np.ndarray, t: int,
                     x_ref: float, tol: float = 1e-9) -> CheckReport:
    """One-step descent inequality for y(t) against a reference point."""
    record = product.record
    s = record.trace.scenario
    if t + 1 >= len(y):
        raise ValueError("need y computed through t+1")
    if not product.pi_converged(t + 1):
        return CheckReport("basic_iter", None, {
            "reason": "pi not converged", "t": t,
        })
    m = record.dim
    L = s.functions.lipschitz
    alpha = record.alphas[t]
    pi_next = product.pi[t + 1]
    objectives = [s.local_objective(i) for i in record.non_faulty]
    sum_dist = float(pi_next @ np.abs(y[t] - record.states[t]))
    sum_gap = math.fsum(
        float(p) * (g.value(float(y[t])) - g.value(x_ref))
        for p, g in zip(pi_next, objectives))
    lhs = (y[t + 1] - x_ref) ** 2
    rhs = (y[t] - x_ref) ** 2 + 4 * L * alpha * sum_dist \
        - 2 * alpha * sum_gap + alpha ** 2 * m * L ** 2
    return CheckReport("basic_iter", lhs <= rhs + tol * max(1.0, abs(rhs)), {
        "t": t, "lhs": lhs, "rhs": rhs,
    })


def supermartingale_terms(product: ProductRecord, y: np.ndarray, t_max: int,
                          x_ref: float) -> dict:
    """Diagnostic partial sums of the almost-supermartingale decomposition."""
    record = product.record
    s = record.trace.scenario
    m = record.dim
    L = s.functions.lipschitz
    objectives = [s.local_objective(i) for i in record.non_faulty]
    optima = [g.value((lo + hi) / 2.0) for g, (lo, hi) in
              ((g, _objective_argmin(g)) for g in objectives)]
    a_seq, b_seq, c_seq = [], [], []
    for t in range(t_max):
        if not product.pi_converged(t + 1):
            break
        pi_next = product.pi[t + 1]
        alpha = record.alphas[t]
        a_seq.append((y[t] - x_ref) ** 2)
        b_seq.append(2 * alpha * math.fsum(
            float(p) * (g.value(float(y[t])) - g_star)
            for p, g, g_star in zip(pi_next, objectives, optima)))
        c_seq.append(4 * L * alpha * float(
            pi_next @ np.abs(y[t] - record.states[t]))
            + alpha ** 2 * m * L ** 2)
    return {
        "a": np.array(a_seq),
        "b": np.array(b_seq),
        "c": np.array(c_seq),
        "sum_b": float(np.sum(b_seq)),
        "sum_c": float(np.sum(c_seq)),
    }


def _objective_argmin(objective) -> tuple[float, float]:
    from byzopt.functions import argmin_interval
    return argmin_interval(list(objective.collection.members),
                           list(objective.weights))
