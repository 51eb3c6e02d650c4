"""Command-line entry point for the benchmark experiments."""

from __future__ import annotations

import argparse
import os
import sys

from .bench import (
    EXPERIMENTS,
    ConfigError,
    ExperimentConfig,
    load_config,
    run_experiment,
    validate_config,
    write_pdf_overlay_csv,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Run a least-squares expansion sampling benchmark experiment.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--workers", type=int, help="parallel work units")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument(
        "--aggregate", action="store_true", help="also write per-group mean/std CSV"
    )
    parser.add_argument(
        "--timings", action="store_true", help="also write wall-clock seconds per unit"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config)
        else:
            cfg = ExperimentConfig()
        cfg.experiment = args.experiment
        if args.seed is not None:
            cfg.seed = args.seed
        if args.workers is not None:
            cfg.workers = args.workers
        validate_config(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    table = run_experiment(cfg)
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, f"{cfg.experiment}.csv")
    table.write_csv(out_path)
    written = [out_path]
    if args.aggregate:
        agg_path = os.path.join(args.out, f"{cfg.experiment}_agg.csv")
        table.write_aggregate_csv(agg_path)
        written.append(agg_path)
    if args.timings:
        t_path = os.path.join(args.out, f"{cfg.experiment}_timings.csv")
        table.write_timings_csv(t_path)
        written.append(t_path)
    overlay = getattr(table, "pdf_overlay", None)
    if overlay is not None:
        pdf_path = os.path.join(args.out, f"{cfg.experiment}_pdf.csv")
        write_pdf_overlay_csv(overlay, pdf_path)
        written.append(pdf_path)
    for path in written:
        print(f"wrote {path}")
    if table.n_errors:
        print(f"{table.n_errors} rows failed", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
