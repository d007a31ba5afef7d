"""Command-line entry points: run experiments, summarize their CSVs, and
export per-iteration convergence traces."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys
from pathlib import Path

from . import harness
from .ao import SCHEMES, TRACE_COLUMNS, run_ao
from .scenario import generate_channels, load_scenario


def _cmd_run(args) -> int:
    spec = harness.load_experiment(args.spec)
    overrides = {}
    if args.seed is not None:
        overrides["seed_base"] = args.seed
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    if args.schemes is not None:
        overrides["schemes"] = tuple(args.schemes.split(","))
    if overrides:
        spec = dataclasses.replace(spec, **overrides)
    out = args.out or spec.output
    if out is None:
        print("no output path: pass --out or set `output` in the spec", file=sys.stderr)
        return 2
    records = harness.run_experiment(spec, jobs=args.jobs)
    harness.write_records_csv(records, out)
    cells = {}
    for rec in records:
        cells.setdefault((rec.scheme, rec.sweep_value), []).append(rec.status == "ok")
    bad = [key for key, oks in cells.items() if not any(oks)]
    for scheme, value in bad:
        print(f"cell ({scheme}, {value}) has no successful trial", file=sys.stderr)
    print(f"wrote {len(records)} records to {out}")
    return 1 if bad else 0


def _cmd_summarize(args) -> int:
    records = harness.read_records_csv(args.infile)
    rows = harness.summarize(records, seed=args.seed or 0)
    harness.write_summary_csv(rows, args.out)
    print(f"wrote {len(rows)} summary rows to {args.out}")
    return 0


def _cmd_trace(args) -> int:
    """Run each scheme once on a common channel draw and write the combined
    per-iteration trace (a `scheme` column in front of the usual columns)."""
    config = load_scenario(args.scenario)
    seed = args.seed if args.seed is not None else config.rng_seed
    channels = generate_channels(config, seed)
    schemes = args.schemes.split(",") if args.schemes else ["proposed"]
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("scheme",) + TRACE_COLUMNS)
        for scheme in schemes:
            _, _, trace = run_ao(channels, config, scheme=scheme, seed=seed)
            for row in trace.rows():
                writer.writerow([scheme] + [repr(v) if isinstance(v, float) else v
                                            for v in row])
    print(f"wrote traces for {', '.join(schemes)} to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starsec",
        description="Secrecy-rate experiments for a STAR-RIS aided MIMO downlink")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment spec, write records CSV")
    run.add_argument("--spec", required=True, type=Path)
    run.add_argument("--out", type=Path)
    run.add_argument("--seed", type=int, help="override the spec's seed base")
    run.add_argument("--trials", type=int, help="override the spec's trial count")
    run.add_argument("--schemes", help=f"comma-separated subset of {','.join(SCHEMES)}")
    run.add_argument("--jobs", type=int, default=1, help="parallel trial workers")
    run.set_defaults(func=_cmd_run)

    summ = sub.add_parser("summarize", help="aggregate a records CSV")
    summ.add_argument("--in", dest="infile", required=True, type=Path)
    summ.add_argument("--out", required=True, type=Path)
    summ.add_argument("--seed", type=int, help="bootstrap seed")
    summ.set_defaults(func=_cmd_summarize)

    trace = sub.add_parser("trace", help="export per-iteration convergence traces")
    trace.add_argument("--scenario", required=True, type=Path)
    trace.add_argument("--out", required=True, type=Path)
    trace.add_argument("--seed", type=int)
    trace.add_argument("--schemes", help="comma-separated scheme list")
    trace.set_defaults(func=_cmd_trace)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
