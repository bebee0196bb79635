"""Tests for configuration resolution and logging setup."""

import logging
import unittest

from wofzfourier.config import (
    DEFAULT_ORACLE_DIGITS,
    DEFAULT_WORKERS,
    PACKAGE_LOGGER,
    configure_logging,
    resolve_oracle_digits,
    resolve_workers,
)
from wofzfourier.csvio import format_float, parse_float
from wofzfourier.exceptions import InvalidParameterError


class TestResolution(unittest.TestCase):
    """Test suite for the settings precedence."""

    def test_defaults(self):
        """Test the module defaults with an empty environment."""
        self.assertEqual(resolve_oracle_digits(None, {}), DEFAULT_ORACLE_DIGITS)
        self.assertEqual(resolve_workers(None, {}), DEFAULT_WORKERS)
        self.assertEqual(resolve_oracle_digits(None, {"WOFZ_ORACLE_DIGITS": "  "}), 30)

    def test_precedence(self):
        """Test that an explicit value wins over the environment."""
        env = {"WOFZ_ORACLE_DIGITS": "40", "WOFZ_WORKERS": "4"}
        self.assertEqual(resolve_oracle_digits(None, env), 40)
        self.assertEqual(resolve_oracle_digits(25, env), 25)
        self.assertEqual(resolve_workers(None, env), 4)
        self.assertEqual(resolve_workers(2, env), 2)

    def test_invalid(self):
        """Test rejection of out-of-range and malformed values."""
        with self.assertRaises(InvalidParameterError):
            resolve_oracle_digits(19, {})
        with self.assertRaises(InvalidParameterError):
            resolve_oracle_digits(None, {"WOFZ_ORACLE_DIGITS": "thirty"})
        with self.assertRaises(InvalidParameterError):
            resolve_oracle_digits(None, {"WOFZ_ORACLE_DIGITS": "12"})
        with self.assertRaises(InvalidParameterError):
            resolve_workers(0, {})
        with self.assertRaises(InvalidParameterError):
            resolve_workers(None, {"WOFZ_WORKERS": "1.5"})


class TestLogging(unittest.TestCase):
    """Test suite for configure_logging."""

    def tearDown(self):
        """Restore the package logger."""
        logger = logging.getLogger(PACKAGE_LOGGER)
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
        logger.setLevel(logging.NOTSET)

    def test_levels(self):
        """Test the verbosity to level mapping."""
        self.assertEqual(configure_logging(0).level, logging.WARNING)
        self.assertEqual(configure_logging(1).level, logging.INFO)
        self.assertEqual(configure_logging(2).level, logging.DEBUG)
        self.assertEqual(configure_logging(5).level, logging.DEBUG)

    def test_single_handler(self):
        """Test that repeated configuration does not stack handlers."""
        configure_logging(1)
        logger = configure_logging(1)
        self.assertEqual(len(logger.handlers), 1)
        self.assertEqual(logger.name, PACKAGE_LOGGER)


class TestNumberFormat(unittest.TestCase):
    """Test suite for the shared float rendering."""

    def test_format(self):
        """Test shortest round-trip rendering."""
        self.assertEqual(format_float(1.0), "1")
        self.assertEqual(format_float(-30.0), "-30")
        self.assertEqual(format_float(-0.0), "0")
        self.assertEqual(format_float(0.1), "0.1")
        self.assertEqual(format_float(1e-14), "1e-14")
        self.assertEqual(format_float(float("nan")), "nan")
        self.assertEqual(format_float(0.3047442052569126), "0.3047442052569126")

    def test_parse(self):
        """Test parsing of rendered values."""
        self.assertEqual(parse_float(" 1e-14 "), 1e-14)
        self.assertEqual(parse_float(format_float(2.0 / 3.0)), 2.0 / 3.0)
        with self.assertRaises(ValueError):
            parse_float("abc")


if __name__ == "__main__":
    unittest.main()
