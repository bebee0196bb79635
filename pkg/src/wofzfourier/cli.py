"""
Command-line interface for wofzfourier.

Subcommands evaluate w(z), process batches, build error maps against the
extended-precision oracle, synthesize Voigt spectra and time the evaluator.
"""

import argparse
import csv
import hashlib
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__, core, oracle
from .config import (
    DEFAULT_BENCH_SEED,
    configure_logging,
    resolve_oracle_digits,
    resolve_workers,
)
from .core import Variant
from .csvio import format_float, parse_float, write_rows
from .exceptions import BatchParseError, InconsistentOracleError, WofzError
from .lineshape import WavenumberGrid, parse_line_list, synthesize_spectrum, write_profile_csv
from .verification import (
    PRESET_GRIDS,
    GridSpec,
    Scale,
    overlap_consistency,
    rel_err_components,
    summarize,
    summary_lines,
    sweep,
    write_error_map_csv,
    write_summary,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ORACLE = 3

BATCH_HEADER = ("x", "y")
BENCH_X_RANGE = (0.0, 40000.0)
BENCH_LOG10_Y_RANGE = (-14.0, 2.0)
CHECKSUM_HEX_DIGITS = 16

NAN_PAIR = (math.nan, math.nan)


@dataclass(frozen=True)
class CommandConfig:
    """Settings shared by every subcommand, resolved once in main."""

    subcommand: str
    variant: Variant
    oracle_digits: int
    workers: int


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def eval_cmd(config: CommandConfig, args: argparse.Namespace) -> int:
    """Evaluate w(x + iy) command handler."""
    z = complex(args.x, args.y)
    w = core.evaluate(z, config.variant)
    print(f"re={format_float(w.real)} im={format_float(w.imag)}")

    if args.check:
        reference = oracle.w_ref_any(z, config.oracle_digits)
        d_re, d_im = rel_err_components(w, reference)
        print(f"delta_re={format_float(d_re)} delta_im={format_float(d_im)}")
    return EXIT_OK


def _read_batch(path: str) -> List[Tuple[float, float]]:
    points: List[Tuple[float, float]] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != BATCH_HEADER:
            raise BatchParseError(f"expected header {','.join(BATCH_HEADER)}")
        data_rows = (row for row in reader if row)
        for row_number, row in enumerate(data_rows, start=1):
            if len(row) != len(BATCH_HEADER):
                raise BatchParseError(f"expected 2 fields, got {len(row)}", row=row_number)
            try:
                points.append((parse_float(row[0]), parse_float(row[1])))
            except ValueError as e:
                raise BatchParseError(str(e), row=row_number) from None
    return points


def _batch_point(
    task: Tuple[float, float, Variant, bool, int]
) -> Tuple[Tuple[float, ...], bool]:
    x, y, variant, check, digits = task
    z = complex(x, y)
    try:
        w = core.evaluate(z, variant)
    except WofzError as e:
        logger.debug("batch point %r failed: %s", z, e)
        return (x, y) + NAN_PAIR + (NAN_PAIR if check else ()), True

    row: Tuple[float, ...] = (x, y, w.real, w.imag)
    if check:
        if math.isfinite(x) and math.isfinite(y):
            row += rel_err_components(w, oracle.w_ref_any(z, digits))
        else:
            row += NAN_PAIR
    return row, False


def batch_cmd(config: CommandConfig, args: argparse.Namespace) -> int:
    """Evaluate every point of a CSV file command handler."""
    points = _read_batch(args.input)
    tasks = [(x, y, config.variant, args.check, config.oracle_digits) for x, y in points]

    if config.workers == 1 or len(tasks) < 2:
        results = [_batch_point(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(_batch_point, tasks, chunksize=64))

    header = ["x", "y", "re", "im"]
    if args.check:
        header += ["delta_re", "delta_im"]
    write_rows(args.output, header, (row for row, _ in results))

    failures = sum(1 for _, failed in results if failed)
    if failures:
        print(f"warning: {failures} row(s) could not be evaluated", file=sys.stderr)
    print(f"Wrote {len(results)} row(s) to {args.output}")
    return EXIT_OK


def _grid_from_args(args: argparse.Namespace) -> GridSpec:
    grid = PRESET_GRIDS[args.preset]
    overrides = {
        "x_min": args.xmin,
        "x_max": args.xmax,
        "nx": args.nx,
        "y_min": args.ymin,
        "y_max": args.ymax,
        "ny": args.ny,
        "y_scale": args.y_scale,
        "x_scale": args.x_scale,
    }
    return replace(grid, **{k: v for k, v in overrides.items() if v is not None})


def errmap_cmd(config: CommandConfig, args: argparse.Namespace) -> int:
    """Write a relative-error map command handler."""
    grid = _grid_from_args(args)
    error_map = sweep(
        grid, config.variant, digits=config.oracle_digits, workers=config.workers
    )
    write_error_map_csv(error_map, args.output)
    summary = summarize(error_map)
    if args.summary:
        write_summary(summary, args.summary)
    for line in summary_lines(summary):
        print(line)
    return EXIT_OK


def overlap_cmd(config: CommandConfig, args: argparse.Namespace) -> int:
    """Compare the exponential and cosine forms command handler."""
    grid = _grid_from_args(args)
    value = overlap_consistency(grid)
    print(f"overlap={format_float(value)}")
    return EXIT_OK


def voigt_cmd(config: CommandConfig, args: argparse.Namespace) -> int:
    """Synthesize a spectrum from a line list command handler."""
    lines = parse_line_list(args.lines)
    grid = WavenumberGrid(args.nu_start, args.nu_end, args.n_points)
    values = synthesize_spectrum(lines, grid)
    count = write_profile_csv(grid.values(), values, args.output)
    print(f"Wrote {count} point(s) for {len(lines)} line(s) to {args.output}")
    return EXIT_OK


def _bench_points(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.uniform(*BENCH_X_RANGE, size=n)
    y = 10.0 ** rng.uniform(*BENCH_LOG10_Y_RANGE, size=n)
    return x + 1j * y


def _bench_chunk(task: Tuple[Sequence[complex], Variant]) -> Tuple[List[complex], int]:
    points, variant = task
    values: List[complex] = []
    failures = 0
    for z in points:
        try:
            values.append(core.evaluate(complex(z), variant))
        except WofzError:
            values.append(complex(math.nan, math.nan))
            failures += 1
    return values, failures


def checksum(values: Sequence[complex]) -> str:
    """SHA-256 over the little-endian doubles of the values, shortened."""
    data = np.asarray(values, dtype="<c16").tobytes()
    return hashlib.sha256(data).hexdigest()[:CHECKSUM_HEX_DIGITS]


def bench_cmd(config: CommandConfig, args: argparse.Namespace) -> int:
    """Time the evaluator on pseudo-random points command handler."""
    if args.n < 1:
        _error(f"--n must be >= 1, got {args.n}")
        return EXIT_USAGE

    points = _bench_points(args.n, args.seed)
    chunks = np.array_split(points, min(config.workers, args.n))
    tasks = [(chunk.tolist(), config.variant) for chunk in chunks]

    started = time.perf_counter()
    if len(tasks) == 1:
        results = [_bench_chunk(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(_bench_chunk, tasks))
    elapsed = max(time.perf_counter() - started, 1e-9)

    values = [v for chunk_values, _ in results for v in chunk_values]
    failures = sum(f for _, f in results)
    print(
        f"evaluations={args.n} failures={failures} seconds={elapsed:.3f} "
        f"rate={args.n / elapsed:.1f} checksum={checksum(values)}"
    )
    return EXIT_OK


def certify_cmd(config: CommandConfig, args: argparse.Namespace) -> int:
    """Run the oracle self-certification command handler."""
    report = oracle.self_certify(config.oracle_digits, samples=args.samples, seed=args.seed)
    print(f"digits={report.digits}")
    print(f"annulus_worst_digits={report.annulus_worst_digits:.2f}")
    print(f"known_point_digits={report.known_point_digits:.2f}")
    print(f"real_axis_worst_digits={report.real_axis_worst_digits:.2f}")
    print(f"monotonic_worst_ratio={report.monotonic_worst_ratio:.3g}")
    print("certified")
    return EXIT_OK


def _add_grid_arguments(parser: argparse.ArgumentParser, default_preset: str) -> None:
    parser.add_argument(
        "--preset",
        choices=sorted(PRESET_GRIDS),
        default=default_preset,
        help=f"Base grid (default: {default_preset})",
    )
    parser.add_argument("--xmin", type=float, help="Smallest x node")
    parser.add_argument("--xmax", type=float, help="Largest x node")
    parser.add_argument("--nx", type=int, help="Number of x nodes")
    parser.add_argument("--ymin", type=float, help="Smallest y node")
    parser.add_argument("--ymax", type=float, help="Largest y node")
    parser.add_argument("--ny", type=int, help="Number of y nodes")

    y_group = parser.add_mutually_exclusive_group()
    y_group.add_argument(
        "--log-y",
        dest="y_scale",
        action="store_const",
        const=Scale.LOG10,
        help="Log-spaced y nodes",
    )
    y_group.add_argument(
        "--linear-y",
        dest="y_scale",
        action="store_const",
        const=Scale.LINEAR,
        help="Evenly spaced y nodes",
    )
    x_group = parser.add_mutually_exclusive_group()
    x_group.add_argument(
        "--log-x",
        dest="x_scale",
        action="store_const",
        const=Scale.LOG10,
        help="Log-spaced x nodes",
    )
    x_group.add_argument(
        "--linear-x",
        dest="x_scale",
        action="store_const",
        const=Scale.LINEAR,
        help="Evenly spaced x nodes",
    )


def get_parser() -> argparse.ArgumentParser:
    """Create and return the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress (-v) or details (-vv) to stderr",
    )
    common.add_argument(
        "--variant",
        choices=[v.value for v in Variant],
        default=Variant.AUTO.value,
        help="Formula for the upper-right quadrant (default: auto)",
    )
    common.add_argument(
        "--oracle-digits",
        type=int,
        help="Oracle precision (default: $WOFZ_ORACLE_DIGITS or 30)",
    )
    common.add_argument(
        "--workers", type=int, help="Worker processes (default: $WOFZ_WORKERS or 1)"
    )

    parser = argparse.ArgumentParser(
        prog="wofzfourier",
        description="Faddeeva function w(z) by Fourier expansion",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    subparsers = parser.add_subparsers(dest="command", help="Command")

    # Evaluate one point
    eval_parser = subparsers.add_parser("eval", help="Evaluate w(x + iy)", parents=[common])
    eval_parser.add_argument("--x", type=float, required=True, help="Real part")
    eval_parser.add_argument("--y", type=float, required=True, help="Imaginary part")
    eval_parser.add_argument(
        "--check", action="store_true", help="Also print relative errors against the oracle"
    )

    # Batch
    batch_parser = subparsers.add_parser(
        "batch", help="Evaluate every row of a CSV file with header x,y", parents=[common]
    )
    batch_parser.add_argument("input", help="Input CSV")
    batch_parser.add_argument("output", help="Output CSV (x,y,re,im)")
    batch_parser.add_argument(
        "--check", action="store_true", help="Append delta_re,delta_im against the oracle"
    )

    # Error map
    errmap_parser = subparsers.add_parser(
        "errmap", help="Write a relative-error map against the oracle", parents=[common]
    )
    _add_grid_arguments(errmap_parser, "axis")
    errmap_parser.add_argument("--output", required=True, help="Error map CSV")
    errmap_parser.add_argument("--summary", help="Summary JSON file")

    # Overlap
    overlap_parser = subparsers.add_parser(
        "overlap", help="Largest disagreement of the two formulas", parents=[common]
    )
    _add_grid_arguments(overlap_parser, "overlap")

    # Voigt spectrum
    voigt_parser = subparsers.add_parser(
        "voigt", help="Synthesize a spectrum from a line list", parents=[common]
    )
    voigt_parser.add_argument(
        "--lines", required=True, help="Line list CSV (nu0,alpha_d,gamma_l,intensity)"
    )
    voigt_parser.add_argument("--nu-start", type=float, required=True, help="First wavenumber")
    voigt_parser.add_argument("--nu-end", type=float, required=True, help="Last wavenumber")
    voigt_parser.add_argument("--n-points", type=int, required=True, help="Number of points")
    voigt_parser.add_argument("--output", required=True, help="Profile CSV (nu,value)")

    # Benchmark
    bench_parser = subparsers.add_parser(
        "bench", help="Time the evaluator on random points", parents=[common]
    )
    bench_parser.add_argument("--n", type=int, default=100000, help="Number of points")
    bench_parser.add_argument("--seed", type=int, default=DEFAULT_BENCH_SEED, help="RNG seed")

    # Oracle self-certification
    certify_parser = subparsers.add_parser(
        "certify", help="Self-certify the extended-precision oracle", parents=[common]
    )
    certify_parser.add_argument("--samples", type=int, default=50, help="Random points per check")
    certify_parser.add_argument("--seed", type=int, default=2016, help="RNG seed")

    return parser


def main(args: Optional[List[str]] = None) -> int:
    """
    Main entry point for the CLI.

    Args:
        args: Command line arguments (if None, sys.argv[1:] is used)

    Returns:
        Exit code (0 success, 2 usage/domain/io errors, 3 oracle inconsistency)
    """
    parser = get_parser()
    parsed_args = parser.parse_args(args)

    if not parsed_args.command:
        parser.print_help()
        return EXIT_OK

    configure_logging(parsed_args.verbose)

    # Command -> function mapping
    commands = {
        "eval": eval_cmd,
        "batch": batch_cmd,
        "errmap": errmap_cmd,
        "overlap": overlap_cmd,
        "voigt": voigt_cmd,
        "bench": bench_cmd,
        "certify": certify_cmd,
    }

    try:
        config = CommandConfig(
            subcommand=parsed_args.command,
            variant=Variant(parsed_args.variant),
            oracle_digits=resolve_oracle_digits(parsed_args.oracle_digits),
            workers=resolve_workers(parsed_args.workers),
        )
        return commands[parsed_args.command](config, parsed_args)
    except InconsistentOracleError as e:
        _error(str(e))
        return EXIT_ORACLE
    except (WofzError, OSError) as e:
        _error(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
