"""Command-line front end.

    sectorlab run --scenario FILE [--out FILE] [--format json|text|csv]
                  [--tolerance X] [--jobs N]
    sectorlab validate --scenario FILE

Exit codes: 0 success, 2 schema violation, 3 failed mathematical
hypothesis, 4 internal tolerance breach. When --out is omitted the report
goes to stdout unless SECTORLAB_OUT_DIR is set, in which case it lands in
that directory as <scenario>.<format>.
"""
from __future__ import annotations

import argparse
import os
import sys

from .errors import ScenarioError
from .runner import emit_report, report_exit_code, run_scenario
from .scenario import load_scenario

OUT_DIR_ENV = "SECTORLAB_OUT_DIR"

EXIT_OK = 0
EXIT_SCHEMA = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sectorlab",
        description="Sector analysis on finite-dimensional operator algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario and emit a report")
    run.add_argument("--scenario", required=True, help="scenario JSON file")
    run.add_argument("--out", help="output file (default stdout)")
    run.add_argument("--format", choices=("json", "text", "csv"), default="json")
    run.add_argument("--tolerance", type=float,
                     help="override the rank/cluster tolerance")
    run.add_argument("--jobs", type=int, default=1,
                     help="worker threads for independent tasks")

    validate = sub.add_parser("validate", help="check a scenario against the schema")
    validate.add_argument("--scenario", required=True, help="scenario JSON file")
    return parser


def _output_path(args, scenario_name: str) -> str | None:
    if args.out:
        return args.out
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir:
        ext = {"json": "json", "text": "txt", "csv": "csv"}[args.format]
        return os.path.join(out_dir, f"{scenario_name}.{ext}")
    return None


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.tolerance is not None:
        if args.tolerance <= 0:
            raise ScenarioError("--tolerance must be positive")
        scenario.tolerances["rank"] = args.tolerance
    report = run_scenario(scenario, jobs=max(1, args.jobs))
    payload = emit_report(report, args.format)
    path = _output_path(args, scenario.name)
    if path is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    else:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(payload)
    return report_exit_code(report)


def _cmd_validate(args) -> int:
    scenario = load_scenario(args.scenario)
    print(f"{args.scenario}: valid ({len(scenario.tasks)} task(s))")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_validate(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
