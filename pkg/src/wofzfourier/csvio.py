"""
Number rendering and CSV helpers shared by every file the package writes.

Files are UTF-8 with LF line endings. Floats are rendered as the shortest
decimal that round-trips to the same double.
"""

import csv
import math
from pathlib import Path
from typing import Iterable, Sequence, Union

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    """
    Render a float as its shortest round-trip decimal.

    Zeros print as "0" whatever their sign, a trailing ".0" is dropped,
    and NaN prints as "nan".

    Args:
        value: Value to render

    Returns:
        The decimal text
    """
    value = float(value)
    if math.isnan(value):
        return "nan"
    if value == 0.0:
        return "0"
    text = repr(value)
    if text.endswith(".0"):
        text = text[:-2]
    return text


def parse_float(text: str) -> float:
    """Parse a decimal written by format_float (or any float literal)."""
    return float(text.strip())


def write_rows(
    path: PathLike, header: Sequence[str], rows: Iterable[Sequence[float]]
) -> int:
    """
    Write a header and numeric rows to a CSV file.

    Args:
        path: Destination file
        header: Column names
        rows: Rows of floats, rendered with format_float

    Returns:
        Number of data rows written
    """
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) for v in row])
            count += 1
    return count
