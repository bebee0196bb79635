"""Integration tests for the wofzfourier package."""

import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path


class TestIntegration(unittest.TestCase):
    """Integration test suite for wofzfourier."""

    def setUp(self):
        """Set up test fixtures."""
        self.temp_dir = tempfile.TemporaryDirectory()
        self.work_dir = Path(self.temp_dir.name)

        self.env = dict(os.environ)
        self.env.pop("WOFZ_ORACLE_DIGITS", None)
        self.env.pop("WOFZ_WORKERS", None)

        # Path to the module
        self.module_path = "wofzfourier"

    def tearDown(self):
        """Tear down test fixtures."""
        self.temp_dir.cleanup()

    def run_command(self, args, env=None):
        """Run a command using the CLI module and return the output and exit code."""
        cmd = [sys.executable, "-m", self.module_path] + args
        process = subprocess.run(
            cmd,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            check=False,
            env=env or self.env,
        )
        return process.stdout, process.stderr, process.returncode

    def test_full_workflow(self):
        """Test evaluation, batch processing, an error map and a spectrum."""
        stdout, stderr, exit_code = self.run_command(["eval", "--x", "1", "--y", "1"])
        self.assertEqual(exit_code, 0, stderr)
        self.assertTrue(stdout.startswith("re=0.304744205"))

        points = self.work_dir / "points.csv"
        points.write_text("x,y\n1,1\n-1,1\n1,-0.5\n", encoding="utf-8")
        values = self.work_dir / "values.csv"
        stdout, stderr, exit_code = self.run_command(["batch", str(points), str(values)])
        self.assertEqual(exit_code, 0, stderr)
        rows = values.read_text(encoding="utf-8").strip().split("\n")
        self.assertEqual(len(rows), 4)
        first = rows[1].split(",")
        second = rows[2].split(",")
        self.assertEqual(first[2], second[2])
        self.assertEqual(float(first[3]), -float(second[3]))

        error_map = self.work_dir / "map.csv"
        args = ["errmap", "--variant", "eq4", "--xmin", "0", "--xmax", "2", "--nx", "3"]
        args += ["--ymin", "1e-10", "--ymax", "1e-2", "--ny", "3", "--output", str(error_map)]
        stdout, stderr, exit_code = self.run_command(args + ["-v"])
        self.assertEqual(exit_code, 0, stderr)
        self.assertIn("max_re=", stdout)
        self.assertIn("[INFO] wofzfourier.verification", stderr)
        self.assertEqual(len(error_map.read_text(encoding="utf-8").strip().split("\n")), 10)

        lines = self.work_dir / "lines.csv"
        lines.write_text("nu0,alpha_d,gamma_l,intensity\n1000,0.1,0.05,1\n", encoding="utf-8")
        spectrum = self.work_dir / "spectrum.csv"
        args = ["voigt", "--lines", str(lines), "--nu-start", "999", "--nu-end", "1001"]
        args += ["--n-points", "21", "--output", str(spectrum)]
        stdout, stderr, exit_code = self.run_command(args)
        self.assertEqual(exit_code, 0, stderr)
        self.assertIn("Wrote 21 point(s)", stdout)

    def test_error_handling(self):
        """Test exit codes for bad input."""
        stdout, stderr, exit_code = self.run_command(
            ["batch", str(self.work_dir / "missing.csv"), str(self.work_dir / "out.csv")]
        )
        self.assertEqual(exit_code, 2)
        self.assertIn("error:", stderr)

        env = dict(self.env, WOFZ_ORACLE_DIGITS="5")
        stdout, stderr, exit_code = self.run_command(["eval", "--x", "1", "--y", "1"], env=env)
        self.assertEqual(exit_code, 2)

        stdout, stderr, exit_code = self.run_command(["eval", "--x", "1"])
        self.assertEqual(exit_code, 2)
        self.assertIn("--y", stderr)

    def test_version(self):
        """Test the version flag."""
        stdout, stderr, exit_code = self.run_command(["--version"])
        self.assertEqual(exit_code, 0)
        self.assertIn("wofzfourier", stdout)


if __name__ == "__main__":
    unittest.main()
