"""Command-line interface: ``partsim validate|run|report``.

Exit codes are stable: 0 success, 1 validation findings or an invalid
scenario, 2 runtime fault (system halt, failed measurement), 3 I/O or
malformed input files.  ``PARTSIM_SEED`` is the fallback when --seed is
not given.  All output is deterministic for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import config as config_mod
from . import harness, trace as trace_mod
from .units import parse_duration

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_RUNTIME = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="partsim",
        description="Deterministic partitioned-system simulator and pub/sub delay harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a system description document")
    p_validate.add_argument("config_path")

    p_run = sub.add_parser("run", help="run a scenario and export its CSV")
    p_run.add_argument("scenario_path")
    p_run.add_argument("--out", help="CSV output path (default: <scenario name>.csv)")
    bound = p_run.add_mutually_exclusive_group()
    bound.add_argument("--frames", type=int, help="run each repetition for N major frames")
    bound.add_argument("--until", help="run each repetition until this duration, e.g. 10ms")
    p_run.add_argument("--seed", type=int, help="override the scenario seed")
    p_run.add_argument("--trace", help="write the first repetition's trace to this path")

    p_report = sub.add_parser("report", help="summarize one or more result CSVs")
    p_report.add_argument("csv_paths", nargs="+")
    return parser


def _summary_lines(rows) -> list[str]:
    groups = harness.group_rows(rows)
    header = (
        f"{'scenario':<20} {'payload_bytes':>13} {'n':>6} {'metric':>9} "
        f"{'mean_ns':>12} {'min_ns':>12} {'max_ns':>12} {'p50_ns':>12} {'p99_ns':>12} "
        f"{'gap_ns':>10} {'lat/gap':>10} {'overhead':>9}"
    )
    lines = [header]
    for (scenario, payload), group in groups.items():
        stats = harness.summarize(group)
        gap = str(stats.scheduled_gap) if stats.scheduled_gap is not None else "-"
        ratio = f"{stats.latency_to_gap_ratio:.6f}" if stats.latency_to_gap_ratio is not None else "-"
        overhead = (
            f"{stats.overhead_ratio * 100:.1f}%" if stats.overhead_ratio is not None else "-"
        )
        lines.append(
            f"{scenario:<20} {payload:>13} {stats.count:>6} {stats.metric:>9} "
            f"{stats.mean:>12} {stats.minimum:>12} {stats.maximum:>12} {stats.p50:>12} "
            f"{stats.p99:>12} {gap:>10} {ratio:>10} {overhead:>9}"
        )
    return lines


def _cmd_validate(args) -> int:
    try:
        text = Path(args.config_path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = config_mod.parse_config(text)
    except config_mod.XmlSyntaxError as exc:
        print(f"ERROR XML_SYNTAX {args.config_path} {exc}")
        return EXIT_FINDINGS
    except config_mod.ConfigError as exc:
        print(f"ERROR SCHEMA {args.config_path} {exc}")
        return EXIT_FINDINGS
    findings = config_mod.validate(cfg)
    for finding in findings:
        print(str(finding))
    return EXIT_FINDINGS if findings else EXIT_OK


def _cmd_run(args) -> int:
    try:
        scenario = harness.load_scenario(args.scenario_path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (config_mod.ConfigError, harness.ScenarioError) as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_FINDINGS

    seed = args.seed
    if seed is None and os.environ.get("PARTSIM_SEED"):
        seed = int(os.environ["PARTSIM_SEED"])
    until = parse_duration(args.until) if args.until else None

    try:
        result = harness.run_scenario(scenario, until=until, frames=args.frames, seed=seed)
    except harness.ScenarioInvalid as exc:
        for finding in exc.findings:
            print(str(finding))
        return EXIT_FINDINGS
    except harness.MeasurementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    out_path = args.out or f"{scenario.name}.csv"
    try:
        harness.export_csv(result.rows, out_path)
        if args.trace:
            trace_mod.write_trace(result.trace or [], args.trace)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    if result.rows:
        for line in _summary_lines(result.rows):
            print(line)
    else:
        print("no data")
    if result.halted:
        print("error: run ended by HALT_SYSTEM", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_report(args) -> int:
    rows = []
    for path in args.csv_paths:
        try:
            rows.extend(harness.read_csv(path))
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        except harness.ScenarioError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    if not rows:
        print("no data")
        return EXIT_OK
    for line in _summary_lines(rows):
        print(line)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "validate":
        return _cmd_validate(args)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_report(args)


if __name__ == "__main__":
    sys.exit(main())
