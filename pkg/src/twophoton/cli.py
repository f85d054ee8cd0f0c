"""Command line entry point.

    twophoton --config run.toml [--out scan.csv] [--seed 7] [--quiet]

Runs the configured delay scan, writes the CSV (and a PNG figure next to it
unless plots are disabled), and prints a closing summary.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 internal
numerical invariant violated.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .fock import DomainError, NumericError
from .report import figure_path, format_summary, render_scan_figure, write_scan_csv
from .scenarios import ScanResult, run_scan, sample_counts

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twophoton",
        description="Simulate a two-photon interference delay scan.",
    )
    parser.add_argument("--config", required=True, help="TOML configuration file")
    parser.add_argument("--out", help="override the CSV output path")
    parser.add_argument("--seed", type=int, help="override the sampling seed")
    parser.add_argument(
        "--quiet", action="store_true", help="suppress the closing summary"
    )
    return parser


def execute(config: RunConfig) -> ScanResult:
    """Run the configured scan, sampling counts when enabled."""
    taus = np.linspace(config.tau_min_fs, config.tau_max_fs, config.steps)
    result = run_scan(config.scenario, taus, config.mode_match)
    if config.sampling_enabled:
        result = sample_counts(
            result, config.pair_rate_hz, config.integration_time_s, config.seed
        )
    return result


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.out is not None:
        config = replace(config, csv_path=args.out)
    if args.seed is not None:
        if args.seed < 0:
            print("configuration error: --seed must be non-negative", file=sys.stderr)
            return EXIT_CONFIG
        config = replace(config, seed=args.seed)

    try:
        result = execute(config)
    except (NumericError, ArithmeticError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except DomainError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        write_scan_csv(result, config.csv_path)
        if config.make_plots:
            render_scan_figure(result, figure_path(config.csv_path))
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    if not args.quiet:
        print(format_summary(result))
        print(f"\nwrote {config.csv_path}")
        if config.make_plots:
            print(f"wrote {figure_path(config.csv_path)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
