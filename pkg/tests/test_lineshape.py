"""Tests for the Voigt line-shape layer of wofzfourier."""

import math
import os
import shutil
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

from wofzfourier import core
from wofzfourier.exceptions import InvalidLineError, InvalidParameterError, LineParseError
from wofzfourier.lineshape import (
    SQRT_LN2,
    SpectralLine,
    WavenumberGrid,
    parse_line_list,
    synthesize_spectrum,
    to_reduced_coords,
    voigt_profile,
    write_profile_csv,
)

trapezoid = getattr(np, "trapezoid", None) or np.trapz


class TestSpectralLine(unittest.TestCase):
    """Test suite for line parameters and reduced coordinates."""

    def test_reduced_coords(self):
        """Test the mapping to x + iy."""
        line = SpectralLine(nu0=1000.0, alpha_d=0.5, gamma_l=0.25)
        z = to_reduced_coords(1001.0, line)
        self.assertAlmostEqual(z.real, 2.0 * SQRT_LN2, places=14)
        self.assertAlmostEqual(z.imag, 0.5 * SQRT_LN2, places=14)
        self.assertEqual(to_reduced_coords(1000.0, line).real, 0.0)

    def test_invalid_lines(self):
        """Test rejection of invalid line parameters."""
        for args in (
            (1000.0, 0.0, 0.1),
            (1000.0, -1.0, 0.1),
            (1000.0, 0.1, -0.1),
            (math.nan, 0.1, 0.1),
        ):
            with self.assertRaises(InvalidLineError):
                SpectralLine(*args)
        with self.assertRaises(InvalidLineError):
            SpectralLine(1000.0, 0.1, 0.1, intensity=-1.0)

    def test_invalid_grid(self):
        """Test rejection of invalid wavenumber grids."""
        with self.assertRaises(InvalidParameterError):
            WavenumberGrid(1.0, 1.0, 10)
        with self.assertRaises(InvalidParameterError):
            WavenumberGrid(0.0, 1.0, 1)


class TestProfiles(unittest.TestCase):
    """Test suite for voigt_profile and synthesize_spectrum."""

    def test_peak_and_symmetry(self):
        """Test the line centre value and mirror symmetry."""
        line = SpectralLine(nu0=0.0, alpha_d=1.0, gamma_l=0.5)
        grid = WavenumberGrid(-5.0, 5.0, 101)
        values = voigt_profile(line, grid)

        self.assertEqual(int(np.argmax(values)), 50)
        expected_peak = SQRT_LN2 / math.sqrt(math.pi) * core.voigt(0.0, line.y)
        self.assertAlmostEqual(values[50], expected_peak, places=14)
        np.testing.assert_allclose(values, values[::-1], rtol=1e-13)

    def test_unit_area(self):
        """Test that a Doppler-dominated profile integrates to its intensity."""
        line = SpectralLine(nu0=0.0, alpha_d=0.01, gamma_l=0.001, intensity=2.0)
        grid = WavenumberGrid(-0.5, 0.5, 10001)
        area = trapezoid(voigt_profile(line, grid), grid.values())
        self.assertAlmostEqual(area, 2.0, delta=0.02)

    def test_doppler_limit(self):
        """Test the Gaussian limit gamma_l = 0."""
        line = SpectralLine(nu0=0.0, alpha_d=1.0, gamma_l=0.0)
        grid = WavenumberGrid(-3.0, 3.0, 61)
        values = voigt_profile(line, grid)
        nu = grid.values()
        gauss = SQRT_LN2 / math.sqrt(math.pi) * np.exp(-math.log(2.0) * nu ** 2)
        np.testing.assert_allclose(values, gauss, rtol=1e-12)

    def test_lorentz_limit(self):
        """Test that a pressure-dominated profile approaches the Lorentzian."""
        line = SpectralLine(nu0=0.0, alpha_d=0.01, gamma_l=1.0)
        grid = WavenumberGrid(-3.0, 3.0, 13)
        nu = grid.values()
        lorentz = 1.0 / (math.pi * (1.0 + nu ** 2))
        np.testing.assert_allclose(voigt_profile(line, grid), lorentz, rtol=1e-3)

    def test_spectrum_sums_lines(self):
        """Test that a spectrum is the sum of its line profiles."""
        lines = [
            SpectralLine(999.5, 0.1, 0.05, 1.0),
            SpectralLine(1000.5, 0.2, 0.01, 0.5),
        ]
        grid = WavenumberGrid(999.0, 1001.0, 201)
        total = synthesize_spectrum(lines, grid)
        expected = voigt_profile(lines[0], grid) + voigt_profile(lines[1], grid)
        np.testing.assert_array_equal(total, expected)

    def test_empty_line_list(self):
        """Test that no lines give a zero spectrum."""
        total = synthesize_spectrum([], WavenumberGrid(0.0, 1.0, 5))
        np.testing.assert_array_equal(total, np.zeros(5))

    def test_routes_through_voigt_function(self):
        """Test that every grid node is evaluated once per line."""
        lines = [SpectralLine(0.0, 1.0, 0.1), SpectralLine(1.0, 1.0, 0.1)]
        grid = WavenumberGrid(-1.0, 2.0, 7)
        with patch("wofzfourier.lineshape.core.voigt", wraps=core.voigt) as mock_voigt:
            synthesize_spectrum(lines, grid)
        self.assertEqual(mock_voigt.call_count, 14)

    def test_narrow_lines_use_cosine_form(self):
        """Test that lines with y below the switch reach w_eq4 and the rest w_eq2."""
        # y = sqrt(ln 2) gamma_l / alpha_d: 0.0083 and 0.83
        narrow = SpectralLine(0.0, 1.0, 0.01)
        broad = SpectralLine(0.0, 1.0, 1.0)
        self.assertLess(to_reduced_coords(0.0, narrow).imag, core.Y_SWITCH)
        self.assertGreater(to_reduced_coords(0.0, broad).imag, core.Y_SWITCH)
        grid = WavenumberGrid(-1.0, 2.0, 7)

        with patch("wofzfourier.core.w_eq4", wraps=core.w_eq4) as mock_eq4:
            with patch("wofzfourier.core.w_eq2", wraps=core.w_eq2) as mock_eq2:
                voigt_profile(narrow, grid)
        self.assertEqual(mock_eq4.call_count, 7)
        self.assertEqual(mock_eq2.call_count, 0)

        with patch("wofzfourier.core.w_eq4", wraps=core.w_eq4) as mock_eq4:
            with patch("wofzfourier.core.w_eq2", wraps=core.w_eq2) as mock_eq2:
                synthesize_spectrum([narrow, broad], grid)
        self.assertEqual(mock_eq4.call_count, 7)
        self.assertEqual(mock_eq2.call_count, 7)


class TestLineListFiles(unittest.TestCase):
    """Test suite for line-list and profile files."""

    def setUp(self):
        """Set up test fixtures."""
        self.test_dir = tempfile.mkdtemp()
        self.path = os.path.join(self.test_dir, "lines.csv")

    def tearDown(self):
        """Clean up test fixtures."""
        shutil.rmtree(self.test_dir)

    def write(self, content):
        with open(self.path, "w", encoding="utf-8") as f:
            f.write(content)

    def test_parse(self):
        """Test a well-formed line list."""
        self.write("nu0,alpha_d,gamma_l,intensity\n1000,0.1,0.05,1\n\n1001.5,0.2,0,0.25\n")
        lines = parse_line_list(self.path)
        self.assertEqual(
            lines,
            [SpectralLine(1000.0, 0.1, 0.05, 1.0), SpectralLine(1001.5, 0.2, 0.0, 0.25)],
        )

    def test_header_only(self):
        """Test that a header without rows gives an empty list."""
        self.write("nu0,alpha_d,gamma_l,intensity\n")
        self.assertEqual(parse_line_list(self.path), [])

    def test_bad_header(self):
        """Test rejection of a missing or wrong header."""
        self.write("")
        with self.assertRaises(LineParseError):
            parse_line_list(self.path)
        self.write("nu,alpha,gamma,s\n1,1,1,1\n")
        with self.assertRaises(LineParseError):
            parse_line_list(self.path)

    def test_malformed_row(self):
        """Test that malformed rows report their row number."""
        self.write("nu0,alpha_d,gamma_l,intensity\n1000,0.1,0.05,1\n1001,abc,0.05,1\n")
        with self.assertRaises(LineParseError) as ctx:
            parse_line_list(self.path)
        self.assertEqual(ctx.exception.row, 2)
        self.assertIn("row 2", str(ctx.exception))

        self.write("nu0,alpha_d,gamma_l,intensity\n1000,0.1\n")
        with self.assertRaises(LineParseError) as ctx:
            parse_line_list(self.path)
        self.assertEqual(ctx.exception.row, 1)

    def test_row_numbers_skip_blank_lines(self):
        """Test that blank lines do not shift the reported row number."""
        self.write("nu0,alpha_d,gamma_l,intensity\n\n1000,0.1,0.05,1\n\n\n1001,abc,0.05,1\n")
        with self.assertRaises(LineParseError) as ctx:
            parse_line_list(self.path)
        self.assertEqual(ctx.exception.row, 2)

        self.write("nu0,alpha_d,gamma_l,intensity\n\n1,0,0,1\n")
        with self.assertRaises(InvalidLineError) as ctx:
            parse_line_list(self.path)
        self.assertEqual(ctx.exception.row, 1)

    def test_invalid_row(self):
        """Test that rows violating the line invariants report their row number."""
        self.write("nu0,alpha_d,gamma_l,intensity\n1000,0.1,0.05,1\n1000,0.1,0.05,1\n1,0,0,1\n")
        with self.assertRaises(InvalidLineError) as ctx:
            parse_line_list(self.path)
        self.assertEqual(ctx.exception.row, 3)

    def test_missing_file(self):
        """Test that an unreadable file raises OSError."""
        with self.assertRaises(OSError):
            parse_line_list(os.path.join(self.test_dir, "missing.csv"))

    def test_write_profile(self):
        """Test the profile CSV layout."""
        out = os.path.join(self.test_dir, "profile.csv")
        count = write_profile_csv([1.0, 1.5], [0.25, 0.0], out)
        self.assertEqual(count, 2)
        with open(out, "r", encoding="utf-8") as f:
            self.assertEqual(f.read(), "nu,value\n1,0.25\n1.5,0\n")

        with self.assertRaises(InvalidParameterError):
            write_profile_csv([1.0], [0.25, 0.5], out)


if __name__ == "__main__":
    unittest.main()
