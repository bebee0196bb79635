"""
Voigt line profiles from physical line parameters.

Both widths are half-widths at half-maximum in cm^-1. A line at nu0 with
Doppler width alpha_d and Lorentz width gamma_l maps to the reduced
coordinates

    x = sqrt(ln 2) * (nu - nu0) / alpha_d,    y = sqrt(ln 2) * gamma_l / alpha_d

and its area-normalized profile is

    intensity * sqrt(ln 2) / (sqrt(pi) * alpha_d) * K(x, y).
"""

import csv
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from . import core
from .core import CoefficientTable
from .csvio import PathLike, parse_float, write_rows
from .exceptions import InvalidLineError, InvalidParameterError, LineParseError

logger = logging.getLogger(__name__)

SQRT_LN2 = math.sqrt(math.log(2.0))

LINE_LIST_HEADER = ("nu0", "alpha_d", "gamma_l", "intensity")
PROFILE_HEADER = ("nu", "value")


def _check_line(nu0: float, alpha_d: float, gamma_l: float, intensity: float) -> None:
    if not all(math.isfinite(v) for v in (nu0, alpha_d, gamma_l, intensity)):
        raise InvalidLineError("line parameters must be finite")
    if not alpha_d > 0.0:
        raise InvalidLineError(f"alpha_d must be > 0, got {alpha_d!r}")
    if gamma_l < 0.0:
        raise InvalidLineError(f"gamma_l must be >= 0, got {gamma_l!r}")
    if intensity < 0.0:
        raise InvalidLineError(f"intensity must be >= 0, got {intensity!r}")


@dataclass(frozen=True)
class SpectralLine:
    """A single spectral line."""

    nu0: float
    alpha_d: float
    gamma_l: float
    intensity: float = 1.0

    def __post_init__(self) -> None:
        _check_line(self.nu0, self.alpha_d, self.gamma_l, self.intensity)

    @property
    def y(self) -> float:
        """Reduced damping parameter of the line."""
        return SQRT_LN2 * self.gamma_l / self.alpha_d


@dataclass(frozen=True)
class WavenumberGrid:
    """Evenly spaced wavenumbers from nu_start to nu_end inclusive."""

    nu_start: float
    nu_end: float
    n_points: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.nu_start) and math.isfinite(self.nu_end)):
            raise InvalidParameterError("wavenumber range must be finite")
        if not self.nu_start < self.nu_end:
            raise InvalidParameterError(
                f"nu_start must be < nu_end, got {self.nu_start} >= {self.nu_end}"
            )
        if self.n_points < 2:
            raise InvalidParameterError(f"n_points must be >= 2, got {self.n_points}")

    def values(self) -> np.ndarray:
        return np.linspace(self.nu_start, self.nu_end, self.n_points)


def to_reduced_coords(nu: float, line: SpectralLine) -> complex:
    """
    Map a wavenumber to the reduced coordinates of a line.

    Args:
        nu: Wavenumber in cm^-1
        line: The line

    Returns:
        x + iy

    Raises:
        InvalidLineError: If the line parameters are invalid
    """
    _check_line(line.nu0, line.alpha_d, line.gamma_l, line.intensity)
    return complex(SQRT_LN2 * (nu - line.nu0) / line.alpha_d, line.y)


def voigt_profile(
    line: SpectralLine,
    grid: WavenumberGrid,
    table: Optional[CoefficientTable] = None,
) -> np.ndarray:
    """
    Area-normalized Voigt profile of one line at every grid node.

    Args:
        line: The line
        grid: Wavenumbers to evaluate at
        table: Coefficient table, default (12, 23)

    Returns:
        Array of length grid.n_points
    """
    scale = line.intensity * SQRT_LN2 / (core.SQRT_PI * line.alpha_d)
    values = np.empty(grid.n_points, dtype=np.float64)
    for i, nu in enumerate(grid.values()):
        z = to_reduced_coords(float(nu), line)
        values[i] = scale * core.voigt(z.real, z.imag, table)
    return values


def synthesize_spectrum(
    lines: Iterable[SpectralLine],
    grid: WavenumberGrid,
    table: Optional[CoefficientTable] = None,
) -> np.ndarray:
    """Sum the profiles of all lines over the grid."""
    total = np.zeros(grid.n_points, dtype=np.float64)
    count = 0
    for line in lines:
        total += voigt_profile(line, grid, table)
        count += 1
    logger.info("synthesized %d line(s) on %d points", count, grid.n_points)
    return total


def parse_line_list(path: PathLike) -> List[SpectralLine]:
    """
    Read a line-list CSV with header nu0,alpha_d,gamma_l,intensity.

    Args:
        path: CSV file

    Returns:
        One SpectralLine per data row, in file order

    Raises:
        OSError: If the file cannot be read
        LineParseError: On a missing header or a malformed row (row numbers
            count data rows from 1)
        InvalidLineError: If a row violates the line invariants
    """
    lines: List[SpectralLine] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != LINE_LIST_HEADER:
            raise LineParseError(
                f"expected header {','.join(LINE_LIST_HEADER)}, got "
                f"{','.join(header) if header else 'nothing'}"
            )
        data_rows = (row for row in reader if row)
        for row_number, row in enumerate(data_rows, start=1):
            lines.append(_parse_row(row, row_number))
    logger.debug("parsed %d line(s) from %s", len(lines), path)
    return lines


def _parse_row(row: Sequence[str], row_number: int) -> SpectralLine:
    if len(row) != len(LINE_LIST_HEADER):
        raise LineParseError(
            f"expected {len(LINE_LIST_HEADER)} fields, got {len(row)}", row=row_number
        )
    try:
        nu0, alpha_d, gamma_l, intensity = (parse_float(v) for v in row)
    except ValueError as e:
        raise LineParseError(str(e), row=row_number) from None
    try:
        return SpectralLine(nu0, alpha_d, gamma_l, intensity)
    except InvalidLineError as e:
        raise InvalidLineError(str(e), row=row_number) from None


def write_profile_csv(nu: Sequence[float], values: Sequence[float], path: PathLike) -> int:
    """
    Write a profile as CSV with header nu,value.

    Returns:
        Number of data rows written
    """
    if len(nu) != len(values):
        raise InvalidParameterError(
            f"nu and values differ in length: {len(nu)} != {len(values)}"
        )
    return write_rows(path, PROFILE_HEADER, zip(nu, values))
