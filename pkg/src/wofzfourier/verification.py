"""
Relative-error measurement of the double-precision evaluators.

A sweep evaluates one variant and the extended-precision oracle at every
node of a GridSpec and stores the component-wise relative errors in an
ErrorMap. Maps are summarized, written as CSV and compared across regions.
"""

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import core, oracle
from .config import resolve_oracle_digits, resolve_workers
from .core import CoefficientTable, Variant
from .csvio import PathLike, format_float, write_rows
from .exceptions import EmptyMapError, InvalidParameterError

logger = logging.getLogger(__name__)

ERROR_MAP_HEADER = ("x", "y", "delta_re", "delta_im")
PERCENTILE = 99.9

OVERLAP_X_RANGE = (0.0, 10.0)
OVERLAP_Y_RANGE = (1e-3, 1e-1)


class Scale(Enum):
    """Spacing of grid nodes along one axis."""

    LINEAR = "linear"
    LOG10 = "log10"


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid of evaluation nodes in the complex plane."""

    x_min: float
    x_max: float
    nx: int
    y_min: float
    y_max: float
    ny: int
    y_scale: Scale = Scale.LINEAR
    x_scale: Scale = Scale.LINEAR

    def __post_init__(self) -> None:
        for axis, lo, hi, n, scale in (
            ("x", self.x_min, self.x_max, self.nx, self.x_scale),
            ("y", self.y_min, self.y_max, self.ny, self.y_scale),
        ):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise InvalidParameterError(f"{axis} range must be finite")
            if lo > hi:
                raise InvalidParameterError(
                    f"{axis}_min must be <= {axis}_max, got {lo} > {hi}"
                )
            if n < 1:
                raise InvalidParameterError(f"n{axis} must be >= 1, got {n}")
            if scale is Scale.LOG10 and lo <= 0.0:
                raise InvalidParameterError(
                    f"log-spaced {axis} needs {axis}_min > 0, got {lo}"
                )

    def x_values(self) -> np.ndarray:
        """Node abscissae, ascending."""
        return _axis(self.x_min, self.x_max, self.nx, self.x_scale)

    def y_values(self) -> np.ndarray:
        """Node ordinates, ascending."""
        return _axis(self.y_min, self.y_max, self.ny, self.y_scale)

    @property
    def size(self) -> int:
        return self.nx * self.ny


def _axis(lo: float, hi: float, n: int, scale: Scale) -> np.ndarray:
    if n == 1:
        return np.array([lo], dtype=np.float64)
    if scale is Scale.LOG10:
        values = np.logspace(math.log10(lo), math.log10(hi), n)
    else:
        values = np.linspace(lo, hi, n)
    # endpoints exactly as given
    values[0] = lo
    values[-1] = hi
    return values


PRESET_GRIDS: Dict[str, GridSpec] = {
    "axis": GridSpec(0.0, 10.0, 101, 1e-14, 1e-1, 61, Scale.LOG10),
    "axis-x2": GridSpec(0.0, 2.0, 41, 1e-14, 1e-1, 61, Scale.LOG10),
    "combined": GridSpec(0.0, 10.0, 101, 1e-14, 1e2, 81, Scale.LOG10),
    "hitran": GridSpec(1e-2, 4e4, 81, 1e-4, 1e2, 41, Scale.LOG10, Scale.LOG10),
    "overlap": GridSpec(0.0, 10.0, 51, 1e-3, 1e-1, 21, Scale.LOG10),
}


@dataclass
class ErrorMap:
    """
    Component-wise relative errors over a grid.

    delta_re and delta_im have shape (ny, nx); row i belongs to the i-th y
    node and column j to the j-th x node. NaN marks a node whose reference
    component is exactly zero.
    """

    grid: GridSpec
    delta_re: np.ndarray
    delta_im: np.ndarray
    variant: Variant

    def __post_init__(self) -> None:
        shape = (self.grid.ny, self.grid.nx)
        if self.delta_re.shape != shape or self.delta_im.shape != shape:
            raise InvalidParameterError(
                f"error matrices must have shape {shape}, got "
                f"{self.delta_re.shape} and {self.delta_im.shape}"
            )


@dataclass(frozen=True)
class ErrorSummary:
    """Maxima, their locations and the 99.9th percentiles of an ErrorMap."""

    max_re: float
    max_im: float
    argmax_re: complex
    argmax_im: complex
    p999_re: float
    p999_im: float

    def as_dict(self) -> Dict[str, float]:
        """Flatten to the keys used by the summary file."""
        return {
            "max_re": self.max_re,
            "max_im": self.max_im,
            "argmax_re_x": self.argmax_re.real,
            "argmax_re_y": self.argmax_re.imag,
            "argmax_im_x": self.argmax_im.real,
            "argmax_im_y": self.argmax_im.imag,
            "p999_re": self.p999_re,
            "p999_im": self.p999_im,
        }


def _relative(approx: float, reference: float) -> float:
    if reference == 0.0:
        return math.nan
    return abs((reference - approx) / reference)


def rel_err_components(
    approx: complex, reference: oracle.ReferenceValue
) -> Tuple[float, float]:
    """
    Relative errors of the real and imaginary parts.

    The reference components are rounded to double first. A component whose
    rounded reference is exactly zero yields NaN.

    Args:
        approx: Double-precision approximation
        reference: Oracle value at the same point

    Returns:
        (delta_re, delta_im)
    """
    approx = complex(approx)
    ref = reference.to_complex()
    return _relative(approx.real, ref.real), _relative(approx.imag, ref.imag)


def _sweep_row(
    task: Tuple[float, Sequence[float], Variant, Optional[CoefficientTable], int]
) -> Tuple[List[float], List[float]]:
    y, xs, variant, table, digits = task
    row_re: List[float] = []
    row_im: List[float] = []
    for x in xs:
        z = complex(x, y)
        approx = core.evaluate(z, variant, table)
        reference = oracle.w_ref_any(z, digits)
        d_re, d_im = rel_err_components(approx, reference)
        row_re.append(d_re)
        row_im.append(d_im)
    return row_re, row_im


def sweep(
    grid: GridSpec,
    variant: Variant = Variant.AUTO,
    table: Optional[CoefficientTable] = None,
    digits: Optional[int] = None,
    workers: Optional[int] = None,
) -> ErrorMap:
    """
    Measure the relative error of a variant at every node of a grid.

    Rows (one y value each) are independent; with workers > 1 they are
    spread over a process pool. Results come back in row order, so the map
    does not depend on the worker count.

    Args:
        grid: Nodes to evaluate
        variant: Formula under test
        table: Coefficient table, default (12, 23)
        digits: Oracle precision; resolved through config when None
        workers: Worker processes; resolved through config when None

    Returns:
        ErrorMap for the grid

    Raises:
        InconsistentOracleError: If the oracle's cross-check fails at a node
    """
    digits = resolve_oracle_digits(digits)
    workers = resolve_workers(workers)
    xs = [float(x) for x in grid.x_values()]
    tasks = [(float(y), xs, variant, table, digits) for y in grid.y_values()]

    logger.info(
        "sweep %s over %dx%d nodes, %d digits, %d worker(s)",
        variant.value,
        grid.nx,
        grid.ny,
        digits,
        workers,
    )
    started = time.perf_counter()
    if workers == 1:
        rows = [_sweep_row(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_sweep_row, tasks))
    logger.info("sweep finished in %.2f s", time.perf_counter() - started)

    delta_re = np.array([row[0] for row in rows], dtype=np.float64)
    delta_im = np.array([row[1] for row in rows], dtype=np.float64)
    return ErrorMap(grid=grid, delta_re=delta_re, delta_im=delta_im, variant=variant)


def _component_summary(
    values: np.ndarray, xs: np.ndarray, ys: np.ndarray
) -> Tuple[float, complex, float]:
    if np.all(np.isnan(values)):
        return math.nan, complex(math.nan, math.nan), math.nan
    row, col = np.unravel_index(int(np.nanargmax(values)), values.shape)
    peak = float(values[row, col])
    p999 = float(np.nanpercentile(values, PERCENTILE))
    return peak, complex(float(xs[col]), float(ys[row])), min(p999, peak)


def summarize(error_map: ErrorMap) -> ErrorSummary:
    """
    Summarize an ErrorMap, ignoring NaN entries.

    A component with no finite entries reports NaN.

    Raises:
        EmptyMapError: If every entry of both components is NaN
    """
    if np.all(np.isnan(error_map.delta_re)) and np.all(np.isnan(error_map.delta_im)):
        raise EmptyMapError("error map has no entries to summarize")

    xs = error_map.grid.x_values()
    ys = error_map.grid.y_values()
    max_re, arg_re, p_re = _component_summary(error_map.delta_re, xs, ys)
    max_im, arg_im, p_im = _component_summary(error_map.delta_im, xs, ys)
    return ErrorSummary(
        max_re=max_re,
        max_im=max_im,
        argmax_re=arg_re,
        argmax_im=arg_im,
        p999_re=p_re,
        p999_im=p_im,
    )


def _nanmax(values: np.ndarray) -> float:
    if values.size == 0 or np.all(np.isnan(values)):
        return math.nan
    return float(np.nanmax(values))


def region_max(
    error_map: ErrorMap, x_max: Optional[float] = None, y_max: Optional[float] = None
) -> Tuple[float, float]:
    """
    Maximum relative errors over the nodes with x <= x_max and y <= y_max.

    Returns:
        (max delta_re, max delta_im); NaN for a component with no entries
    """
    cols = np.ones(error_map.grid.nx, dtype=bool)
    rows = np.ones(error_map.grid.ny, dtype=bool)
    if x_max is not None:
        cols = error_map.grid.x_values() <= x_max
    if y_max is not None:
        rows = error_map.grid.y_values() <= y_max
    mask = np.ix_(rows, cols)
    return _nanmax(error_map.delta_re[mask]), _nanmax(error_map.delta_im[mask])


def overlap_consistency(
    grid: GridSpec,
    table: Optional[CoefficientTable] = None,
    first: Variant = Variant.EQ2,
    second: Variant = Variant.EQ4,
) -> float:
    """
    Largest disagreement max |w_first - w_second| / |w_first| over a grid.

    Args:
        grid: Nodes inside 0 <= x <= 10, 1e-3 <= y <= 1e-1
        table: Coefficient table, default (12, 23)
        first: Reference variant of the quotient
        second: Variant compared against it

    Returns:
        The maximum relative discrepancy

    Raises:
        InvalidParameterError: If the grid leaves the band where both
            variants are accurate
    """
    x_lo, x_hi = OVERLAP_X_RANGE
    y_lo, y_hi = OVERLAP_Y_RANGE
    inside_x = x_lo <= grid.x_min and grid.x_max <= x_hi
    inside_y = y_lo <= grid.y_min and grid.y_max <= y_hi
    if not (inside_x and inside_y):
        raise InvalidParameterError(
            f"overlap grid must lie within {x_lo} <= x <= {x_hi}, {y_lo} <= y <= {y_hi}"
        )

    worst = 0.0
    for y in grid.y_values():
        for x in grid.x_values():
            z = complex(float(x), float(y))
            a = core.evaluate(z, first, table)
            b = core.evaluate(z, second, table)
            worst = max(worst, abs(a - b) / abs(a))
    logger.debug(
        "overlap %s/%s over %d nodes: %g", first.value, second.value, grid.size, worst
    )
    return worst


def write_error_map_csv(error_map: ErrorMap, path: PathLike) -> int:
    """
    Write an ErrorMap as CSV, y outer and x inner.

    Returns:
        Number of data rows written
    """
    xs = error_map.grid.x_values()
    ys = error_map.grid.y_values()
    rows = (
        (xs[j], ys[i], error_map.delta_re[i, j], error_map.delta_im[i, j])
        for i in range(len(ys))
        for j in range(len(xs))
    )
    return write_rows(path, ERROR_MAP_HEADER, rows)


def summary_lines(summary: ErrorSummary) -> List[str]:
    """Render a summary as key=value lines."""
    return [f"{key}={format_float(value)}" for key, value in summary.as_dict().items()]


def write_summary(summary: ErrorSummary, path: PathLike) -> None:
    """Write a summary as one JSON object; NaN is written as null."""
    payload = {
        key: (None if math.isnan(value) else value)
        for key, value in summary.as_dict().items()
    }
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
