"""Command-line front end: run, check-graph, analyze, list-scenarios.

Configs are JSON documents (see harness); positional CONFIG arguments
accept either a file path or a scenario-library name.  Repeated
``--set dotted.path=value`` flags override config fields.  The output root
comes from --out or the BYZOPT_OUTPUT_ROOT environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from byzopt.consensus import ScenarioError
from byzopt.decoding import DecodeFailure
from byzopt.harness import (
    SCENARIO_LIBRARY,
    ConfigError,
    analyze_dir,
    apply_overrides,
    check_graph,
    config_hash,
    output_root,
    run_config,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID_CONFIG = 2
EXIT_DECODE_FAILURE = 3


def _load_config(target: str) -> tuple[dict, str]:
    if target in SCENARIO_LIBRARY:
        return SCENARIO_LIBRARY[target].build(), target
    path = Path(target)
    if not path.exists():
        raise ConfigError([
            f"{target!r} is neither a config file nor a library scenario "
            f"(known scenarios: {', '.join(sorted(SCENARIO_LIBRARY))})"])
    return json.loads(path.read_text()), path.stem


def _cmd_run(args) -> int:
    config, name = _load_config(args.config)
    config = apply_overrides(config, args.set)
    outdir = Path(args.out) if args.out else output_root() / name
    summary = run_config(config, outdir)
    print(json.dumps(summary, indent=2, sort_keys=True))
    print(f"artifacts written to {outdir}", file=sys.stderr)
    return EXIT_OK


def _cmd_check_graph(args) -> int:
    config, _ = _load_config(args.config)
    config = apply_overrides(config, args.set)
    report = check_graph(config)
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_analyze(args) -> int:
    report = analyze_dir(Path(args.trace_dir))
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_list(args) -> int:
    for name in sorted(SCENARIO_LIBRARY):
        entry = SCENARIO_LIBRARY[name]
        print(f"{name:28s} {entry.description}")
        if args.hashes:
            print(f"{'':28s} config_hash={config_hash(entry.build())}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="byzopt",
        description="Fault-tolerant multi-agent optimization simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario config")
    p_run.add_argument("config", help="config path or library scenario name")
    p_run.add_argument("--out", help="output directory")
    p_run.add_argument("--set", action="append", default=[],
                       metavar="PATH=VALUE", help="override a config field")
    p_run.set_defaults(fn=_cmd_run)

    p_chk = sub.add_parser("check-graph",
                           help="Condition 1/2 verdicts with witnesses")
    p_chk.add_argument("config", help="config path or library scenario name")
    p_chk.add_argument("--set", action="append", default=[],
                       metavar="PATH=VALUE")
    p_chk.set_defaults(fn=_cmd_check_graph)

    p_ana = sub.add_parser("analyze",
                           help="verification battery on an existing trace")
    p_ana.add_argument("trace_dir", help="directory produced by `run`")
    p_ana.set_defaults(fn=_cmd_analyze)

    p_list = sub.add_parser("list-scenarios", help="named scenario library")
    p_list.add_argument("--hashes", action="store_true",
                        help="also print config hashes")
    p_list.set_defaults(fn=_cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print("invalid configuration:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  - {problem}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except ScenarioError as exc:
        print("invalid scenario:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  - {problem}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except DecodeFailure as exc:
        print(f"decode failure: {exc}", file=sys.stderr)
        return EXIT_DECODE_FAILURE
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
