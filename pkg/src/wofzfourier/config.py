"""
Configuration defaults and overrides for wofzfourier.

Values are resolved as: explicit argument, then environment variable, then
the module default.
"""

import logging
import os
import sys
from typing import Mapping, Optional

from .exceptions import InvalidParameterError

DEFAULT_ORACLE_DIGITS = 30
MIN_ORACLE_DIGITS = 20
ORACLE_DIGITS_ENV = "WOFZ_ORACLE_DIGITS"

DEFAULT_WORKERS = 1
WORKERS_ENV = "WOFZ_WORKERS"

DEFAULT_BENCH_SEED = 20160625

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"
PACKAGE_LOGGER = "wofzfourier"


def _from_environ(
    name: str, environ: Optional[Mapping[str, str]]
) -> Optional[int]:
    env = os.environ if environ is None else environ
    raw = env.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameterError(
            f"{name} must be an integer, got {raw!r}"
        ) from None


def resolve_oracle_digits(
    value: Optional[int] = None, environ: Optional[Mapping[str, str]] = None
) -> int:
    """
    Resolve the decimal precision used by the reference oracle.

    Args:
        value: Explicit precision (e.g. from --oracle-digits), or None
        environ: Environment mapping; defaults to os.environ

    Returns:
        The precision in decimal digits

    Raises:
        InvalidParameterError: If the resolved value is below MIN_ORACLE_DIGITS
            or the environment variable is not an integer
    """
    digits = value
    if digits is None:
        digits = _from_environ(ORACLE_DIGITS_ENV, environ)
    if digits is None:
        digits = DEFAULT_ORACLE_DIGITS
    if digits < MIN_ORACLE_DIGITS:
        raise InvalidParameterError(
            f"oracle digits must be >= {MIN_ORACLE_DIGITS}, got {digits}"
        )
    return digits


def resolve_workers(
    value: Optional[int] = None, environ: Optional[Mapping[str, str]] = None
) -> int:
    """Resolve the number of worker processes for sweeps and batches."""
    workers = value
    if workers is None:
        workers = _from_environ(WORKERS_ENV, environ)
    if workers is None:
        workers = DEFAULT_WORKERS
    if workers < 1:
        raise InvalidParameterError(f"workers must be >= 1, got {workers}")
    return workers


def configure_logging(verbosity: int = 0) -> logging.Logger:
    """
    Attach a stderr handler to the package logger.

    Args:
        verbosity: 0 for WARNING, 1 for INFO, 2 or more for DEBUG

    Returns:
        The configured package logger
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)

    if verbosity >= 2:
        logger.setLevel(logging.DEBUG)
    elif verbosity == 1:
        logger.setLevel(logging.INFO)
    else:
        logger.setLevel(logging.WARNING)
    return logger
