"""Config-driven runner: JSON scenarios, named library, trace/report export.

One JSON document describes an execution end to end (graph, faults,
adversary, assignment, functions, schedule, horizon, seed, analysis
window).  Running it produces a fixed, versioned set of artifacts in the
output directory:

    resolved_config.json   the exact config executed (after overrides)
    trace.csv              round, agent, value, is_faulty
    summary.json           final spread / distance-to-optimum / flags
    decode_reports.json    per-round decode support and residual (decoded runs)
    analysis.json          reconstruction and bound checks (via `analyze`)
    y_series.csv           frozen-subgradient consensus value per round
    spread.csv             spread and distance-to-optimum per round

Identical configs produce byte-identical CSVs; `analyze` re-executes the
config, verifies the stored trace matches, then runs the verification
battery on the reconstructed matrices.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from byzopt import analysis as ana
from byzopt.adversaries import adversary_from_config
from byzopt.assignment import (
    AssignmentMatrix,
    ConstructionError,
    identity,
    repetition,
    sparsest,
)
from byzopt.consensus import Scenario, ScenarioError, Trace, diagnostics, run_scenario
from byzopt.decoding import DecodeFailure, centralized_descent, run_algorithm1
from byzopt.functions import (
    AbsShift,
    FlatBottom,
    FnCollection,
    PiecewiseOnlyError,
    SmoothAbs,
    argmin_interval,
    argmin_interval_grid,
    classify_redundancy,
    optimum_set_global,
)
from byzopt.graphs import (
    DiGraph,
    FaultySet,
    check_condition1,
    check_condition2,
    complete,
    cycle,
    from_edges,
    star_out,
)
from byzopt.schedules import StepSchedule

__all__ = [
    "ConfigError",
    "ScenarioLibraryEntry",
    "SCENARIO_LIBRARY",
    "config_hash",
    "apply_overrides",
    "build_scenario",
    "validate_config",
    "run_config",
    "check_graph",
    "analyze_dir",
    "output_root",
]

SUMMARY_SCHEMA = "byzopt.summary@1"
ANALYSIS_SCHEMA = "byzopt.analysis@1"
GRAPH_CHECK_SCHEMA = "byzopt.graph_check@1"
OUTPUT_ROOT_ENV = "BYZOPT_OUTPUT_ROOT"


class ConfigError(ValueError):
    """Invalid configuration; carries every problem found, not just the first."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))


# ---------------------------------------------------------------------------
# Parsers
# ---------------------------------------------------------------------------

def _graph_from_config(cfg: Mapping) -> DiGraph:
    kind = cfg.get("kind")
    if kind == "complete":
        return complete(int(cfg["n"]))
    if kind == "cycle":
        return cycle(int(cfg["n"]))
    if kind == "star_out":
        return star_out(int(cfg["n"]))
    if kind == "custom":
        n = int(cfg["n"])
        if "edges" in cfg:
            return from_edges(n, [(int(i), int(j)) for i, j in cfg["edges"]])
        if "adjacency" in cfg:
            edges = [(int(i), int(j))
                     for i, outs in cfg["adjacency"].items() for j in outs]
            return from_edges(n, edges)
        raise ConfigError(["custom graph needs 'edges' or 'adjacency' (field: graph)"])
    raise ConfigError([f"unknown graph kind {kind!r} (field: graph.kind)"])


def _assignment_from_config(cfg: Mapping) -> AssignmentMatrix:
    kind = cfg.get("kind")
    if kind == "identity":
        return identity(int(cfg["k"]))
    if kind == "repetition":
        return repetition(int(cfg["k"]), int(cfg["copies"]))
    if kind == "sparsest":
        return sparsest(int(cfg["k"]), int(cfg["n"]), int(cfg["s"]),
                        seed=int(cfg.get("seed", 0)))
    if kind == "explicit":
        return AssignmentMatrix(np.array(cfg["entries"], dtype=float))
    raise ConfigError([f"unknown assignment kind {kind!r} (field: assignment.kind)"])


_FUNCTION_KINDS = {
    "abs": lambda c: AbsShift(float(c["center"]), float(c.get("weight", 1.0))),
    "flat": lambda c: FlatBottom(float(c["lo"]), float(c["hi"]),
                                 float(c.get("slope_left", 1.0)),
                                 float(c.get("slope_right", 1.0))),
    "smooth_abs": lambda c: SmoothAbs(float(c["center"]),
                                      float(c.get("smoothing", 0.25))),
}


def _functions_from_config(cfgs) -> FnCollection:
    members = []
    for pos, c in enumerate(cfgs):
        kind = c.get("kind")
        if kind not in _FUNCTION_KINDS:
            raise ConfigError(
                [f"unknown function kind {kind!r} (field: functions[{pos}])"])
        members.append(_FUNCTION_KINDS[kind](c))
    return FnCollection(tuple(members))


def _schedule_from_config(cfg: Mapping) -> StepSchedule:
    return StepSchedule(cfg.get("kind", "harmonic"), float(cfg.get("a", 1.0)),
                        float(cfg.get("p", 1.0)))


def build_scenario(config: Mapping) -> Scenario:
    """Turn a validated config document into a Scenario."""
    problems = validate_config(config)
    if problems:
        raise ConfigError(problems)
    graph = _graph_from_config(config["graph"])
    x0 = config["x0"]
    if isinstance(x0, (int, float)):
        x0 = (float(x0),) * graph.n
    adv_cfg = config.get("adversary", {"kind": "constant", "params": {"value": 0.0}})
    return Scenario(
        graph=graph,
        faulty=FaultySet(frozenset(int(a) for a in config.get("faulty", ())),
                         int(config["f"])),
        adversary=adversary_from_config(adv_cfg["kind"], adv_cfg.get("params")),
        assignment=_assignment_from_config(config["assignment"]),
        functions=_functions_from_config(config["functions"]),
        schedule=_schedule_from_config(config.get("schedule", {})),
        x0=tuple(float(v) for v in x0),
        rounds=int(config["rounds"]),
        default_value=float(config.get("default_value", 0.0)),
        seed=int(config.get("seed", 0)),
        subgrad_rule=config.get("subgrad_rule", "midpoint"),
        adversarial_demo=bool(config.get("adversarial_demo", False)),
    )


def validate_config(config: Mapping) -> list[str]:
    """Collect every schema problem; an empty list means the config builds."""
    problems: list[str] = []

    def attempt(field: str, fn: Callable):
        try:
            return fn()
        except ConfigError as exc:
            problems.extend(exc.problems)
        except (KeyError, TypeError, ValueError, ConstructionError) as exc:
            problems.append(f"{exc} (field: {field})")
        return None

    algorithm = config.get("algorithm", "alg2")
    if algorithm not in ("alg1", "alg2"):
        problems.append(f"unknown algorithm {algorithm!r} (field: algorithm)")
    graph = attempt("graph", lambda: _graph_from_config(config.get("graph", {})))
    assignment = attempt("assignment",
                         lambda: _assignment_from_config(config.get("assignment", {})))
    functions = attempt("functions",
                        lambda: _functions_from_config(config.get("functions", ())))
    attempt("schedule", lambda: _schedule_from_config(config.get("schedule", {})))
    adv = config.get("adversary", {"kind": "constant", "params": {"value": 0.0}})
    attempt("adversary",
            lambda: adversary_from_config(adv.get("kind"), adv.get("params")))
    if "f" not in config:
        problems.append("missing fault bound (field: f)")
    if "rounds" not in config:
        problems.append("missing round count (field: rounds)")
    if "x0" not in config:
        problems.append("missing initial estimates (field: x0)")

    if problems:
        return problems

    faulty = attempt("faulty", lambda: FaultySet(
        frozenset(int(a) for a in config.get("faulty", ())), int(config["f"])))
    if graph is None or faulty is None:
        return problems
    x0 = config["x0"]
    if isinstance(x0, (int, float)):
        x0 = (float(x0),) * graph.n
    try:
        scenario = Scenario(
            graph=graph, faulty=faulty,
            adversary=adversary_from_config(adv["kind"], adv.get("params")),
            assignment=assignment, functions=functions,
            schedule=_schedule_from_config(config.get("schedule", {})),
            x0=tuple(float(v) for v in x0),
            rounds=int(config["rounds"]),
            default_value=float(config.get("default_value", 0.0)),
            seed=int(config.get("seed", 0)),
            subgrad_rule=config.get("subgrad_rule", "midpoint"),
            adversarial_demo=bool(config.get("adversarial_demo", False)),
        )
    except (TypeError, ValueError) as exc:
        problems.append(str(exc))
        return problems
    problems.extend(scenario.validate())
    return problems


# ---------------------------------------------------------------------------
# Hashing, overrides, output locations
# ---------------------------------------------------------------------------

def config_hash(config: Mapping) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def apply_overrides(config: dict, overrides) -> dict:
    """Apply `dotted.path=json_value` overrides to a copy of the config."""
    out = json.loads(json.dumps(config))
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError([f"override {item!r} is not of the form path=value"])
        path, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = out
        parts = path.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    return out


def output_root() -> Path:
    return Path(os.environ.get(OUTPUT_ROOT_ENV, "outputs"))


# ---------------------------------------------------------------------------
# Optimum interval of the averaged inputs
# ---------------------------------------------------------------------------

def optimum_interval(functions: FnCollection) -> tuple[float, float, bool]:
    """(lo, hi, exact) for the average of the inputs."""
    opt = optimum_set_global(functions)
    if opt.exact:
        return opt.lo, opt.hi, True
    try:
        lo, hi = argmin_interval(list(functions.members))
        return lo, hi, True
    except PiecewiseOnlyError:
        lo, hi = argmin_interval_grid(functions.average_value, opt.lo - 1.0,
                                      opt.hi + 1.0)
        return lo, hi, False


# ---------------------------------------------------------------------------
# Run / export
# ---------------------------------------------------------------------------

def _write_trace_csv(path: Path, trace: Trace) -> None:
    faulty = trace.scenario.faulty.members
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "agent", "value", "is_faulty"])
        for t in range(trace.states.shape[0]):
            for agent in range(1, trace.states.shape[1] + 1):
                writer.writerow([t, agent, repr(float(trace.states[t, agent - 1])),
                                 int(agent in faulty)])


def _write_json(path: Path, payload: Mapping) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def run_config(config: Mapping, outdir: Path) -> dict:
    """Execute a config and write the artifact set; returns the summary."""
    problems = validate_config(config)
    if problems:
        raise ConfigError(problems)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    scenario = build_scenario(config)
    algorithm = config.get("algorithm", "alg2")
    chash = config_hash(config)

    decode_payload = None
    oracle_dev = None
    if algorithm == "alg1":
        run = run_algorithm1(scenario)
        trace = run.trace
        oracle = centralized_descent(scenario.functions, scenario.schedule,
                                     scenario.x0[scenario.non_faulty[0] - 1],
                                     scenario.rounds)
        oracle_dev = float(np.abs(
            trace.states[:, scenario.non_faulty[0] - 1] - oracle).max())
        decode_payload = [{"round": r.round, "support": list(r.support),
                           "residual": r.residual} for r in run.reports]
    else:
        trace = run_scenario(scenario)

    lo, hi, exact = optimum_interval(scenario.functions)
    diag = diagnostics(trace, lo, hi)
    summary = {
        "schema": SUMMARY_SCHEMA,
        "config_hash": chash,
        "algorithm": algorithm,
        "n": scenario.graph.n,
        "rounds": scenario.rounds,
        "fault_bound": scenario.faulty.f,
        "faulty": sorted(scenario.faulty.members),
        "final_spread": float(diag.spread[-1]),
        "final_dist_to_optimum": float(diag.dist_to_optimum[-1]),
        "optimum_lo": lo,
        "optimum_hi": hi,
        "optimum_exact": exact,
        "in_optimum": diag.in_optimum,
        "redundancy_case": classify_redundancy(scenario.functions).name,
        "expected_failure": bool(config.get("expected_failure", False)),
        "degenerate_rounds": len(trace.degenerate_rounds),
        "oracle_max_deviation": oracle_dev,
        "decode_rounds_with_errors": (
            sum(1 for r in decode_payload if r["support"])
            if decode_payload is not None else None),
    }

    _write_json(outdir / "resolved_config.json", config)
    _write_trace_csv(outdir / "trace.csv", trace)
    _write_json(outdir / "summary.json", summary)
    if decode_payload is not None:
        _write_json(outdir / "decode_reports.json",
                    {"schema": "byzopt.decode_reports@1", "config_hash": chash,
                     "reports": decode_payload})
    return summary


# ---------------------------------------------------------------------------
# Graph checking
# ---------------------------------------------------------------------------

def check_graph(config: Mapping) -> dict:
    """Condition 1/2 verdicts with witnesses for the config's graph."""
    graph = _graph_from_config(config.get("graph", {}))
    f = int(config["f"])
    if "assignment" in config:
        from byzopt.assignment import sparsity_by_definition
        sp = sparsity_by_definition(
            _assignment_from_config(config["assignment"])).value
    else:
        sp = int(config.get("s", f + 1))
    sp = min(sp, graph.n + 1)

    c1 = check_condition1(graph, f, sp)
    c2 = check_condition2(graph, f)
    report: dict = {
        "schema": GRAPH_CHECK_SCHEMA,
        "config_hash": config_hash(config),
        "n": graph.n,
        "f": f,
        "sparsity": sp,
        "condition1": {"holds": c1.holds, "bound": c1.bound},
        "condition2": {"holds": c2.holds},
    }
    if not c1.holds:
        report["condition1"]["witness"] = {
            "faulty": sorted(c1.witness_faulty.members),
            "removed_edges": {str(k): sorted(v) for k, v in
                              c1.witness_graph.removed_edges.items()},
            "source_component": sorted(c1.witness_source),
        }
    if not c2.holds:
        w = c2.witness
        report["condition2"]["witness"] = {
            "L": sorted(w.L), "R": sorted(w.R),
            "C": sorted(w.C), "F": sorted(w.F),
        }
    return report


# ---------------------------------------------------------------------------
# Post-hoc analysis
# ---------------------------------------------------------------------------

def analyze_dir(trace_dir: Path) -> dict:
    """Re-execute the stored config, verify the trace, run the checks."""
    trace_dir = Path(trace_dir)
    cfg_path = trace_dir / "resolved_config.json"
    if not cfg_path.exists():
        raise FileNotFoundError(f"missing {cfg_path}")
    config = json.loads(cfg_path.read_text())
    summary = json.loads((trace_dir / "summary.json").read_text())
    chash = config_hash(config)
    if summary.get("config_hash") != chash:
        raise ConfigError(["summary config_hash does not match resolved_config"])

    scenario = build_scenario(config)
    algorithm = config.get("algorithm", "alg2")
    if algorithm == "alg1":
        run = run_algorithm1(scenario)
        trace = run.trace
        stored = json.loads((trace_dir / "decode_reports.json").read_text())
        fresh = [{"round": r.round, "support": list(r.support),
                  "residual": r.residual} for r in run.reports]
        report = {
            "schema": ANALYSIS_SCHEMA,
            "config_hash": chash,
            "algorithm": algorithm,
            "trace_reproduced": _trace_matches(trace_dir / "trace.csv", trace),
            "decode_reports_reproduced": stored["reports"] == fresh,
            "rounds": scenario.rounds,
        }
        _write_json(trace_dir / "analysis.json", report)
        return report

    trace = run_scenario(scenario)
    if not _trace_matches(trace_dir / "trace.csv", trace):
        raise ConfigError(["stored trace.csv does not match a re-run of the config"])

    acfg = config.get("analysis", {})
    record = ana.build_transition_record(trace)
    residuals = ana.reconstruction_residuals(record)
    props = ana.matrix_properties(record)

    witness_rounds = min(int(acfg.get("witness_rounds", 25)), record.rounds)
    witness_ok = True
    for t in range(witness_rounds):
        if ana.find_reduced_witness(record.matrices[t], record.beta,
                                    scenario.graph, scenario.faulty,
                                    record.non_faulty) is None:
            witness_ok = False
            break

    report = {
        "schema": ANALYSIS_SCHEMA,
        "config_hash": chash,
        "algorithm": algorithm,
        "trace_reproduced": True,
        "rounds": record.rounds,
        "beta": record.beta,
        "max_reconstruction_residual": float(residuals.max()) if record.rounds else 0.0,
        "reconstruction_residuals": [float(v) for v in residuals],
        "matrix_properties": props.detail | {"passed": props.passed},
        "witness_rounds_checked": witness_rounds,
        "witness_all_found": witness_ok,
    }

    mixing_possible = scenario.graph.n <= 6 and scenario.faulty.f <= 1
    if mixing_possible and record.rounds:
        uub_t_max = min(int(acfg.get("uub_t_max", 50)), record.rounds - 1)
        window = acfg.get("window", [0, min(10, record.rounds - 1)])
        window = [min(int(window[0]), record.rounds - 1),
                  min(int(window[1]), record.rounds)]
        basic_stride = int(acfg.get("basic_iter_stride", 10))
        lb_rounds = acfg.get("lb_rounds", [0])
        pi_max_r = max(uub_t_max + 1, window[1] + 1)
        product = ana.build_product_record(record, pi_max_r=pi_max_r)
        y, y_dev = ana.y_sequence(product, uub_t_max)

        rate_margins = []
        rate_table = []
        for r in range(window[0], window[1]):
            for t in range(r, window[1]):
                rep = ana.check_rate(product, t, r)
                if rep.passed is not None:
                    rate_margins.append((rep.detail["margin"], rep.passed))
                    rate_table.append({"t": t, "r": r,
                                       "margin": float(rep.detail["margin"])})
        uub_reports = [ana.check_uub(product, y, t) for t in range(1, uub_t_max + 1)]
        lo, hi, _ = optimum_interval(scenario.functions)
        x_ref = (lo + hi) / 2.0
        basic_reports = [ana.check_basic_iter(product, y, t, x_ref)
                         for t in range(0, uub_t_max, basic_stride)]
        lb_reports = [ana.check_lemma_lb(product, int(r)) for r in lb_rounds]
        pi_reports = [ana.check_pi_lower(product, int(r)) for r in lb_rounds]

        report.update({
            "tau": product.tau,
            "nu": product.nu,
            "gamma": product.gamma,
            "y_recurrence_deviation": y_dev,
            "rate_checks": {"count": len(rate_margins),
                            "all_passed": all(p for _, p in rate_margins),
                            "min_margin": min((m for m, _ in rate_margins),
                                              default=None),
                            "margins": rate_table},
            "uub_checks": {"count": len(uub_reports),
                           "all_passed": all(r.passed for r in uub_reports),
                           "max_lhs": max(r.detail["lhs"] for r in uub_reports),
                           "bound_at_last": uub_reports[-1].detail["bound"],
                           "margins": [
                               {"t": r.detail["t"],
                                "margin": float(r.detail["bound"] - r.detail["lhs"])}
                               for r in uub_reports]},
            "basic_iter_checks": {
                "count": len(basic_reports),
                "all_passed": all(r.passed is not False for r in basic_reports)},
            "lemma_lb": [r.detail | {"passed": r.passed} for r in lb_reports],
            "pi_lower": [r.detail | {"passed": r.passed} for r in pi_reports],
        })
        _write_series_csv(trace_dir / "y_series.csv", ["t", "y"],
                          [(t, repr(float(v))) for t, v in enumerate(y)])
    else:
        report["mixing_diagnostics"] = "skipped (needs n <= 6 and f <= 1)"

    lo, hi, _ = optimum_interval(scenario.functions)
    diag = diagnostics(trace, lo, hi)
    _write_series_csv(trace_dir / "spread.csv",
                      ["t", "spread", "dist_to_optimum"],
                      [(t, repr(float(s)), repr(float(d)))
                       for t, (s, d) in enumerate(zip(diag.spread,
                                                      diag.dist_to_optimum))])
    _write_json(trace_dir / "analysis.json", report)
    return report


def _write_series_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _trace_matches(csv_path: Path, trace: Trace) -> bool:
    import io
    buf = io.StringIO()
    faulty = trace.scenario.faulty.members
    writer = csv.writer(buf)
    writer.writerow(["round", "agent", "value", "is_faulty"])
    for t in range(trace.states.shape[0]):
        for agent in range(1, trace.states.shape[1] + 1):
            writer.writerow([t, agent, repr(float(trace.states[t, agent - 1])),
                             int(agent in faulty)])
    stored = csv_path.read_text()
    return stored.replace("\r\n", "\n") == buf.getvalue().replace("\r\n", "\n")


# ---------------------------------------------------------------------------
# Scenario library
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioLibraryEntry:
    name: str
    description: str
    build: Callable[[], dict]


def _lib_alg1_identity_f0() -> dict:
    return {
        "algorithm": "alg1",
        "graph": {"kind": "complete", "n": 3},
        "f": 0,
        "faulty": [],
        "adversary": {"kind": "constant", "params": {"value": 0.0}},
        "assignment": {"kind": "identity", "k": 3},
        "functions": [{"kind": "smooth_abs", "center": 0.0},
                      {"kind": "smooth_abs", "center": 1.0},
                      {"kind": "smooth_abs", "center": -2.0}],
        "schedule": {"kind": "harmonic", "a": 0.5},
        "x0": 2.0,
        "rounds": 300,
        "seed": 1,
    }


def _lib_alg1_repetition_f1() -> dict:
    return {
        "algorithm": "alg1",
        "graph": {"kind": "complete", "n": 5},
        "f": 1,
        "faulty": [4],
        "adversary": {"kind": "constant", "params": {"value": 1e9}},
        "assignment": {"kind": "repetition", "k": 1, "copies": 5},
        "functions": [{"kind": "smooth_abs", "center": 0.7, "smoothing": 0.3}],
        "schedule": {"kind": "harmonic", "a": 0.5},
        "x0": 2.0,
        "rounds": 500,
        "seed": 1,
    }


def _lib_alg1_repetition_f2() -> dict:
    cfg = _lib_alg1_repetition_f1()
    cfg.update({"f": 2, "faulty": [3, 5],
                "adversary": {"kind": "split", "params": {"v_low": -1e3, "v_high": 1e3}}})
    return cfg


def _lib_impossibility_demo() -> dict:
    # identity assignment with one crashed agent: the surviving agent can
    # only minimize its own input and provably misses the true optimum
    return {
        "algorithm": "alg2",
        "graph": {"kind": "custom", "n": 2, "edges": [[1, 2], [2, 1]]},
        "f": 1,
        "faulty": [2],
        "adversary": {"kind": "crash", "params": {"after_round": 0}},
        "assignment": {"kind": "identity", "k": 2},
        "functions": [{"kind": "abs", "center": 0.0, "weight": 1.0},
                      {"kind": "abs", "center": 1.0, "weight": 3.0}],
        "schedule": {"kind": "harmonic", "a": 1.0},
        "x0": [0.9, 0.6],
        "rounds": 20000,
        "seed": 1,
        "adversarial_demo": True,
        "expected_failure": True,
    }


def _lib_k5_trimmed_flatbottom() -> dict:
    return {
        "algorithm": "alg2",
        "graph": {"kind": "complete", "n": 5},
        "f": 1,
        "faulty": [5],
        "adversary": {"kind": "constant", "params": {"value": 1e6}},
        "assignment": {"kind": "explicit", "entries": [
            [0.0, 1 / 3, 1 / 3, 1 / 3, 0.25],
            [1 / 3, 0.0, 1 / 3, 1 / 3, 0.25],
            [1 / 3, 1 / 3, 0.0, 1 / 3, 0.25],
            [1 / 3, 1 / 3, 1 / 3, 0.0, 0.25],
        ]},
        "functions": [
            {"kind": "flat", "lo": 0.0, "hi": 0.6},
            {"kind": "flat", "lo": 0.4, "hi": 1.0},
            {"kind": "flat", "lo": -0.2, "hi": 0.6},
            {"kind": "flat", "lo": 0.4, "hi": 0.8},
        ],
        "schedule": {"kind": "harmonic", "a": 1.0},
        "x0": [-0.8, 1.9, 0.3, 1.2, 0.0],
        "rounds": 20000,
        "seed": 7,
        "analysis": {"uub_t_max": 200, "window": [0, 12], "witness_rounds": 25,
                     "basic_iter_stride": 20, "lb_rounds": [0]},
    }


def _lib_k5_mixing_window() -> dict:
    cfg = _lib_k5_trimmed_flatbottom()
    cfg.update({
        "rounds": 1100,
        "analysis": {"uub_t_max": 40, "window": [0, 30], "witness_rounds": 40,
                     "basic_iter_stride": 10, "lb_rounds": [0, 10, 20, 30]},
    })
    return cfg


def _lib_partition_counterexample() -> dict:
    low = [1, 2, 3]
    high = [4, 5, 6]
    edges = [[a, b] for a in low for b in low if a != b]
    edges += [[a, b] for a in high for b in high if a != b]
    edges += [[7, j] for j in range(1, 7)]
    return {
        "algorithm": "alg2",
        "graph": {"kind": "custom", "n": 7, "edges": edges},
        "f": 1,
        "faulty": [7],
        "adversary": {"kind": "split", "params": {"v_low": 0.0, "v_high": 1.0}},
        "assignment": {"kind": "repetition", "k": 1, "copies": 7},
        "functions": [{"kind": "flat", "lo": -1.0, "hi": 2.0}],
        "schedule": {"kind": "harmonic", "a": 1.0},
        "x0": [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.5],
        "rounds": 500,
        "seed": 1,
        "adversarial_demo": True,
        "expected_failure": True,
    }


def _lib_gsize_tight_k5() -> dict:
    # complete graph of the minimum size for sparsity 3 with one fault
    return {
        "algorithm": "alg2",
        "graph": {"kind": "complete", "n": 5},
        "f": 1,
        "faulty": [5],
        "adversary": {"kind": "constant", "params": {"value": -1e3}},
        "assignment": {"kind": "explicit", "entries": [
            [0.0, 0.0, 1 / 3, 0.5, 0.5],
            [0.5, 0.5, 1 / 3, 0.0, 0.0],
            [0.5, 0.5, 1 / 3, 0.5, 0.5],
        ]},
        "functions": [
            {"kind": "flat", "lo": 0.0, "hi": 1.0},
            {"kind": "flat", "lo": 0.5, "hi": 1.5},
            {"kind": "flat", "lo": 0.25, "hi": 1.25},
        ],
        "schedule": {"kind": "harmonic", "a": 1.0},
        "x0": [2.0, -1.0, 0.5, 3.0, 0.0],
        "rounds": 2000,
        "seed": 3,
    }


SCENARIO_LIBRARY: dict[str, ScenarioLibraryEntry] = {
    e.name: e for e in [
        ScenarioLibraryEntry(
            "alg1-identity-f0",
            "decoded descent with no faults equals centralized descent",
            _lib_alg1_identity_f0),
        ScenarioLibraryEntry(
            "alg1-repetition-f1",
            "one loud liar against a 5-copy repetition assignment",
            _lib_alg1_repetition_f1),
        ScenarioLibraryEntry(
            "alg1-repetition-f2",
            "two equivocating liars, still decoded exactly",
            _lib_alg1_repetition_f2),
        ScenarioLibraryEntry(
            "impossibility-demo",
            "identity assignment + crash: survivors provably miss the optimum",
            _lib_impossibility_demo),
        ScenarioLibraryEntry(
            "k5-trimmed-flatbottom",
            "trimmed consensus over K5 converging into a shared optimum",
            _lib_k5_trimmed_flatbottom),
        ScenarioLibraryEntry(
            "k5-mixing-window",
            "short K5 run sized for the full mixing-bound battery",
            _lib_k5_mixing_window),
        ScenarioLibraryEntry(
            "partition-counterexample",
            "condition-violating graph where two camps never reconcile",
            _lib_partition_counterexample),
        ScenarioLibraryEntry(
            "gsize-tight-k5",
            "minimum-size complete graph for sparsity 3 with one fault",
            _lib_gsize_tight_k5),
    ]
}
