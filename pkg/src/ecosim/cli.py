"""Headless command-line entry point.

Exit codes: 0 success, 2 configuration problems (bad flags or config
file), 3 input data problems, 4 runtime failures. Output artifacts are a
pure function of the inputs; nothing time- or host-dependent is written,
so identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import RunConfig
from .errors import ConfigError, DataError, EcosimError
from .runner import execute_run, load_inputs, write_artifacts

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecosim",
        description="Simulate building-stock emission scenarios and write outcome artifacts.",
    )
    parser.add_argument("--stock", required=True, help="building stock CSV")
    parser.add_argument("--emission-table", required=True, help="archetype emission CSV")
    parser.add_argument("--config", required=True, help="run configuration JSON")
    parser.add_argument("--seed", required=True, type=_non_negative_int, help="simulation seed")
    parser.add_argument(
        "--iterations", required=True, type=_positive_int, help="Monte Carlo iteration count"
    )
    parser.add_argument("--out-dir", required=True, help="artifact output directory")
    parser.add_argument(
        "--sample", type=_positive_int, metavar="N", help="simulate a random N-building sample"
    )
    parser.add_argument(
        "--intensity-table",
        help="operational intensity CSV (bundled synthetic table by default)",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr)

    try:
        config = RunConfig.from_file(args.config)
        config = config.with_overrides(seed=args.seed, iterations=args.iterations)
        if args.sample is not None:
            config = config.with_overrides(sample_size=args.sample)
    except ConfigError as exc:
        _report_config_error(exc)
        return EXIT_CONFIG

    try:
        inputs = load_inputs(args.stock, args.emission_table, args.intensity_table)
    except DataError as exc:
        print(f"ecosim: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"ecosim: data error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_DATA

    progress = None if args.quiet else _progress_printer()
    try:
        result = execute_run(inputs, config, progress=progress)
        paths = write_artifacts(result, args.out_dir)
    except ConfigError as exc:
        _report_config_error(exc)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"ecosim: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EcosimError, OSError, ValueError) as exc:
        print(f"ecosim: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    if not args.quiet:
        for name in sorted(paths):
            print(f"wrote {paths[name]}", file=sys.stderr)
    return EXIT_OK


def _report_config_error(exc: ConfigError) -> None:
    print(f"ecosim: configuration error: {exc}", file=sys.stderr)
    for field, message in sorted(exc.field_errors.items()):
        print(f"  {field}: {message}", file=sys.stderr)


def _progress_printer():
    last_decade = -1

    def progress(done: int, total: int) -> None:
        # Print in 10% steps; the engine already throttles to 1% events.
        nonlocal last_decade
        decade = done * 100 // total // 10
        if decade > last_decade:
            last_decade = decade
            print(f"progress {decade * 10}%", file=sys.stderr)

    return progress


if __name__ == "__main__":
    sys.exit(main())
