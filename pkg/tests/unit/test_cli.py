"""Tests for the cli module."""

import csv
import logging
import math
import sys
import tempfile
from io import StringIO
from pathlib import Path
from typing import Dict, List
from unittest import TestCase
from unittest.mock import patch

from fdde.cli import __doc__ as doc
from fdde.cli import __version__ as version
from fdde.cli import run

# disconnect logging for testing
logging.captureWarnings(True)
logging.disable(logging.CRITICAL)

CONFIGS = "tests/fixtures/configs"


def read_csv(path: Path) -> List[Dict[str, float]]:
    with open(path, encoding="utf8") as file:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(file)]


def parse_csv(text: str) -> List[Dict[str, float]]:
    return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(StringIO(text))]


class CliTestCase(TestCase):
    """Runs the cli with a temporary output directory."""

    def setUp(self) -> None:
        """Create a temporary output directory."""
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self) -> None:
        """Remove the temporary output directory."""
        self.tmp.cleanup()

    def run_cli(self, *args: str) -> str:
        """Run the cli to completion and return what it printed on stdout."""
        sys.argv = ["fdde", *args]
        with patch("sys.stdout", new=StringIO()) as output:
            with patch("sys.stderr", new=StringIO()) as errors:
                run()
        self.stderr = errors.getvalue()
        return output.getvalue()

    def assertExitCode(self, code: int, *args: str) -> None:
        sys.argv = ["fdde", *args]
        with patch("sys.stdout", new=StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                run()
        self.assertEqual(ctx.exception.code, code)


class TestCommands(TestCase):
    """Test the --help and --version commands."""

    def test_help(self) -> None:
        """--help command should print cli module docstring"""
        sys.argv = ["fdde", "--help"]
        with patch("sys.stdout", new=StringIO()) as output:
            self.assertRaises(SystemExit, run)
            self.assertEqual(output.getvalue().strip(), doc.strip())

    def test_version(self) -> None:
        """--version command should print program version"""
        sys.argv = ["fdde", "--version"]
        with patch("sys.stdout", new=StringIO()) as output:
            self.assertRaises(SystemExit, run)
            self.assertEqual(output.getvalue().strip(), version.strip())


class TestExact(CliTestCase):
    """Test the exact command."""

    def test_stdout(self) -> None:
        """should print one CSV table per experiment without --out"""
        output = self.run_cli("exact", "--config", f"{CONFIGS}/batch.jsonl")
        lines = output.splitlines()
        self.assertEqual(lines.count("t,y"), 2)
        self.assertEqual(lines[1], "0,2")
        self.assertEqual(len(lines), 12)

    def test_out(self) -> None:
        """should write the grid solution to a file"""
        path = self.dir / "ramp.csv"
        output = self.run_cli("exact", "-c", f"{CONFIGS}/linear_ramp.json", "-o", str(path))
        self.assertIn("wrote 33 rows", output)
        rows = read_csv(path)
        self.assertEqual(len(rows), 33)
        self.assertEqual(rows[0], {"t": 0.0, "y": 1.0})
        self.assertEqual(rows[-1]["t"], 2.0)

    def test_overrides(self) -> None:
        """should let options replace config values"""
        path = self.dir / "ramp.jsonl"
        self.run_cli(
            "exact", "-c", f"{CONFIGS}/linear_ramp.json", "--h", "0.5", "--T", "1",
            "--operator", "caputo", "-o", str(path),
        )
        self.assertEqual(len(path.read_text().splitlines()), 3)

    def test_deterministic(self) -> None:
        """should write byte-identical files on repeated runs"""
        first, second = self.dir / "first.csv", self.dir / "second.csv"
        self.run_cli("exact", "-c", f"{CONFIGS}/linear_ramp.json", "-o", str(first))
        self.run_cli("exact", "-c", f"{CONFIGS}/linear_ramp.json", "-o", str(second))
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_nonlinear(self) -> None:
        """should exit with code 2 for a problem without a closed form"""
        self.assertExitCode(2, "exact", "-c", f"{CONFIGS}/logistic.json")


class TestSolve(CliTestCase):
    """Test the solve command."""

    def test_solve(self) -> None:
        """should solve linear and nonlinear problems"""
        for name in ("linear_ramp.json", "logistic.json", "sampled.json"):
            path = self.dir / name.replace(".json", ".csv")
            self.run_cli("solve", "-c", f"{CONFIGS}/{name}", "-o", str(path))
            rows = read_csv(path)
            self.assertEqual(rows[-1]["t"], 2.0)

    def test_overflow(self) -> None:
        """should exit with code 3 when the solver fails"""
        self.assertExitCode(3, "solve", "-c", f"{CONFIGS}/overflow.json")


class TestCompare(CliTestCase):
    """Test the compare command."""

    def test_compare(self) -> None:
        """should tabulate both solutions and report a small discrepancy"""
        path = self.dir / "compare.csv"
        self.run_cli("compare", "-c", f"{CONFIGS}/linear_ramp.json", "-o", str(path))
        self.assertIn("linear_ramp: max |(ŷ - y) - J(corrective)|", self.stderr)
        rows = read_csv(path)
        self.assertEqual(list(rows[0]), ["t", "y", "y_hat", "diff", "j_corrective"])
        self.assertTrue(all(abs(row["diff"] - row["j_corrective"]) <= 1e-6 for row in rows))

    def test_stdout(self) -> None:
        """should keep the summary out of the CSV printed without --out"""
        output = self.run_cli("compare", "-c", f"{CONFIGS}/linear_ramp.json")
        self.assertNotIn("max |", output)
        self.assertEqual(len(parse_csv(output)), 33)
        self.assertIn("max |(ŷ - y) - J(corrective)|", self.stderr)


class TestConverge(CliTestCase):
    """Test the converge command."""

    def test_exact_reference(self) -> None:
        """should write one row per step size"""
        path = self.dir / "orders.csv"
        self.run_cli("converge", "-c", f"{CONFIGS}/linear_ramp.json", "-o", str(path))
        self.assertIn("observed order", self.stderr)
        rows = read_csv(path)
        self.assertEqual([row["h"] for row in rows], [0.125, 0.0625, 0.03125])
        self.assertLess(rows[-1]["max_error"], rows[0]["max_error"])
        self.assertLess(rows[-1]["max_error"], 0.1)

    def test_stdout(self) -> None:
        """should print the table as CSV without --out"""
        output = self.run_cli("converge", "-c", f"{CONFIGS}/linear_ramp.json")
        self.assertEqual(output.splitlines()[0], "h,max_error,observed_order")
        rows = parse_csv(output)
        self.assertEqual([row["h"] for row in rows], [0.125, 0.0625, 0.03125])
        self.assertTrue(math.isnan(rows[0]["observed_order"]))

    def test_self_convergence(self) -> None:
        """should fall back on self-convergence for nonlinear problems"""
        path = self.dir / "orders.csv"
        self.run_cli(
            "converge", "-c", f"{CONFIGS}/logistic.json", "--steps", "0.25,0.125", "-o", str(path)
        )
        self.assertEqual(len(read_csv(path)), 2)


class TestErrors(CliTestCase):
    """Test exit codes for invalid input."""

    def test_invalid_config(self) -> None:
        """should exit with code 2 for invalid or missing configs"""
        self.assertExitCode(2, "exact", "-c", f"{CONFIGS}/unknown_key.json")
        self.assertExitCode(2, "exact", "-c", f"{CONFIGS}/missing.json")
        self.assertExitCode(2, "exact", "-c", f"{CONFIGS}/linear_ramp.json", "--alpha", "1.5")
        self.assertExitCode(2, "converge", "-c", f"{CONFIGS}/linear_ramp.json", "--steps", "a,b")

    def test_invalid_output(self) -> None:
        """should exit with code 2 for unsupported output formats"""
        out = str(self.dir / "out.xlsx")
        self.assertExitCode(2, "exact", "-c", f"{CONFIGS}/linear_ramp.json", "-o", out)

    def test_invalid_figure(self) -> None:
        """should exit with code 2 for unknown figures"""
        self.assertExitCode(2, "figure", "7", "-o", str(self.dir))
        self.assertExitCode(2, "figure", "one", "-o", str(self.dir))


class TestFigures(CliTestCase):
    """Test the qualitative features of the figure presets."""

    def figure(self, number: int) -> Dict[str, List[Dict[str, float]]]:
        self.run_cli("figure", str(number), "--out", str(self.dir))
        return {
            path.stem: read_csv(path) for path in sorted(self.dir.glob(f"fig{number}_*.csv"))
        }

    def assertDecays(self, rows: List[Dict[str, float]]) -> None:
        late = [abs(row["y"]) for row in rows if row["t"] >= 5.0]
        self.assertLess(max(late), 1.0)

    def test_constant_history(self) -> None:
        """should write decaying curves for figure 1"""
        curves = self.figure(1)
        self.assertEqual(sorted(curves), ["fig1_cosine", "fig1_unforced"])
        for rows in curves.values():
            self.assertEqual(rows[0]["y"], 1.0)
            self.assertEqual(rows[-1]["t"], 10.0)
            self.assertDecays(rows)

    def test_ramp_history(self) -> None:
        """should write decaying curves for figure 2"""
        curves = self.figure(2)
        self.assertEqual(sorted(curves), ["fig2_cosine", "fig2_unforced"])
        for rows in curves.values():
            self.assertDecays(rows)

    def test_difference(self) -> None:
        """should keep the φτ solution below the Caputo one and let them merge"""
        curves = self.figure(3)
        self.assertEqual(sorted(curves), ["fig3_sine", "fig3_unforced"])
        for rows in curves.values():
            diff = {row["t"]: row["diff"] for row in rows}
            self.assertTrue(all(d <= 0 for d in diff.values()))
            self.assertTrue(all(d < 0 for t, d in diff.items() if 0 < t <= 1.0))
            self.assertLess(abs(diff[10.0]), abs(diff[1.0]))
            self.assertTrue(all(abs(r["diff"] - r["j_corrective"]) <= 1e-6 for r in rows))

    def test_alpha_to_one(self) -> None:
        """should shrink the gap between the operators as α approaches 1"""
        gaps = {}
        for number in (4, 5):
            for name, rows in self.figure(number).items():
                gaps[name] = max(abs(row["diff"]) for row in rows)
        self.assertEqual(sorted(gaps), ["fig4_logistic", "fig5_alpha090", "fig5_alpha098"])
        self.assertLess(gaps["fig5_alpha098"], gaps["fig5_alpha090"])
        self.assertLess(gaps["fig5_alpha090"], gaps["fig4_logistic"])
