"""Command-line surface: subcommands, formats, exit codes, config."""

from __future__ import annotations

import json
import re
import subprocess
import sys

from mpmath import mpf

import pytest

from tachyon_selfforce import working_digits
from tachyon_selfforce.cli import run
from tachyon_selfforce.records import SWEEP_HEADER


def invoke(capsys, *argv: str) -> tuple[int, str, str]:
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSingularBetas:
    def test_csv_output(self, capsys):
        code, out, _ = invoke(
            capsys, "singular-betas", "--count", "3", "--digits", "16"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "k,phi,beta"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert first[0] == "1"
        with working_digits(30):
            assert abs(mpf(first[2]) - mpf("4.603338848751700")) < mpf("1e-14")

    def test_json_output(self, capsys):
        code, out, _ = invoke(
            capsys, "singular-betas", "--count", "2", "--digits", "16",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert [entry["k"] for entry in payload] == [1, 2]

    def test_deterministic(self, capsys):
        args = ("singular-betas", "--count", "2", "--digits", "16")
        _, out1, _ = invoke(capsys, *args)
        _, out2, _ = invoke(capsys, *args)
        assert out1 == out2


class TestRoots:
    def test_subluminal_exit_code(self, capsys):
        code, _, err = invoke(capsys, "roots", "--beta", "0.5")
        assert code == 2
        assert "beta must exceed 1" in err

    def test_csv_has_expected_columns(self, capsys):
        code, out, _ = invoke(capsys, "roots", "--beta", "5", "--digits", "16")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "index,tau,phi,K,multiplicity"
        assert len(lines) == 4  # three roots at beta = 5


class TestForce:
    def test_time_symmetric_json(self, capsys):
        code, out, _ = invoke(
            capsys, "force", "--beta", "3", "--model", "fw", "--digits", "20"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["model"] == "feynman_wheeler"
        assert "epsilon" not in payload
        with working_digits(40):
            assert mpf(payload["F_azimuthal"]) == 0
            assert mpf(payload["Z"]) < 0

    def test_causal_json_has_positive_ratio(self, capsys):
        code, out, _ = invoke(
            capsys, "force", "--beta", "3", "--model", "causal", "--digits", "20"
        )
        payload = json.loads(out)
        assert code == 0
        with working_digits(40):
            assert mpf(payload["epsilon"]) > 0

    def test_csv_format_uses_sweep_schema(self, capsys):
        code, out, _ = invoke(
            capsys, "force", "--beta", "3", "--digits", "16", "--format", "csv"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == ",".join(SWEEP_HEADER)
        assert lines[1].endswith(",ok")

    def test_precision_exhausted_exit_code(self, capsys):
        # A speed this close to the first singular velocity cannot
        # stabilize within a 100-digit cap.
        code, _, err = invoke(
            capsys, "force", "--beta", "4.603338848751700352557", "--digits", "40",
            "--cap", "100",
        )
        assert code == 3
        assert "cap" in err or "digits" in err


class TestSweepAndPlot:
    def test_sweep_schema_and_plot(self, capsys, tmp_path):
        csv_path = tmp_path / "sweep.csv"
        code, _, _ = invoke(
            capsys, "sweep", "--beta-min", "2", "--beta-max", "4", "--points", "3",
            "--digits", "16", "--output", str(csv_path),
        )
        assert code == 0
        text = csv_path.read_text()
        lines = text.strip().splitlines()
        assert lines[0] == ",".join(SWEEP_HEADER)
        assert len(lines) == 4

        svg_path = tmp_path / "plot.svg"
        code, _, _ = invoke(
            capsys, "plot", "--input", str(csv_path), "--output", str(svg_path),
            "--markers", "0",
        )
        assert code == 0
        svg = svg_path.read_text()
        polylines = re.findall(r'<polyline class="series" points="([^"]*)"', svg)
        assert len(polylines) == 1
        assert len(polylines[0].split()) == 3

    def test_plot_gap_rule(self, capsys, tmp_path):
        header = ",".join(SWEEP_HEADER)
        rows = [
            "2.0,feynman_wheeler,1,1.5,0.0,-1.5,,16,ok",
            "3.0,feynman_wheeler,,,,,,,skipped_singular",
            "4.0,feynman_wheeler,1,2.0,0.0,-2.0,,16,ok",
            "5.0,feynman_wheeler,1,2.5,0.0,-2.5,,16,ok",
        ]
        csv_path = tmp_path / "gap.csv"
        csv_path.write_text(header + "\n" + "\n".join(rows) + "\n")
        code, out, _ = invoke(
            capsys, "plot", "--input", str(csv_path), "--markers", "0"
        )
        assert code == 0
        assert len(re.findall(r'<polyline class="series"', out)) == 1
        assert len(re.findall(r'<circle class="series"', out)) == 1

    def test_plot_malformed_csv_is_io_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("nope\n1,2\n")
        code, _, err = invoke(capsys, "plot", "--input", str(bad))
        assert code == 4
        assert "header" in err

    def test_plot_missing_input_is_io_error(self, capsys, tmp_path):
        code, _, _ = invoke(capsys, "plot", "--input", str(tmp_path / "none.csv"))
        assert code == 4

    def test_threads_do_not_change_output(self, capsys):
        args = ("sweep", "--beta-min", "2", "--beta-max", "3", "--points", "3",
                "--digits", "16")
        _, out1, _ = invoke(capsys, *args, "--threads", "1")
        _, out2, _ = invoke(capsys, *args, "--threads", "2")
        assert out1 == out2


class TestRefineCommand:
    def test_summary_on_stderr_and_rows_on_stdout(self, capsys):
        code, out, err = invoke(
            capsys, "refine", "--k", "1", "--window", "0.5", "--depth", "1",
            "--digits", "16", "--cap", "400",
        )
        assert code == 0
        assert out.splitlines()[0] == ",".join(SWEEP_HEADER)
        assert "refine summary: sign_changes=" in err

    def test_low_cap_rejected(self, capsys):
        code, _, err = invoke(
            capsys, "refine", "--k", "1", "--window", "0.5", "--depth", "1",
            "--digits", "16", "--cap", "300",
        )
        assert code == 2
        assert "cap_digits" in err


class TestRadius:
    def test_given_Z(self, capsys):
        code, out, _ = invoke(
            capsys, "radius", "--beta", "1.4142135623730951", "--Z", "-1",
            "--digits", "16",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["dynamics"] == "eq2"
        with working_digits(30):
            assert abs(mpf(payload["radius"]) - mpf("0.5")) < mpf("1e-10")

    def test_computed_Z(self, capsys):
        code, out, _ = invoke(capsys, "radius", "--beta", "3", "--digits", "16")
        assert code == 0
        payload = json.loads(out)
        assert payload["dynamics"] == "eq2"  # repulsive at beta = 3
        with working_digits(30):
            assert mpf(payload["Z"]) < 0
            assert mpf(payload["radius"]) > 0


class TestFormatsAndConfig:
    def test_svg_only_for_plot(self, capsys):
        code, _, err = invoke(
            capsys, "force", "--beta", "3", "--format", "svg", "--digits", "16"
        )
        assert code == 2
        assert "svg" in err

    def test_plot_only_svg(self, capsys, tmp_path):
        csv_path = tmp_path / "s.csv"
        csv_path.write_text(",".join(SWEEP_HEADER) + "\n")
        code, _, err = invoke(
            capsys, "plot", "--input", str(csv_path), "--format", "csv"
        )
        assert code == 2

    def test_config_supplies_defaults_and_flags_override(self, capsys, tmp_path):
        config = tmp_path / "run.conf"
        config.write_text("digits = 12\ncount = 2\n")
        code, out, _ = invoke(
            capsys, "singular-betas", "--config", str(config)
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 3  # header + 2 rows from config
        assert len(lines[1].split(",")[2].replace(".", "").lstrip("0")) <= 13

        code, out, _ = invoke(
            capsys, "singular-betas", "--config", str(config), "--count", "1"
        )
        lines = out.strip().splitlines()
        assert len(lines) == 2  # flag wins over config

    def test_bad_config_line(self, capsys, tmp_path):
        config = tmp_path / "bad.conf"
        config.write_text("digits 12\n")
        code, _, err = invoke(capsys, "singular-betas", "--config", str(config))
        assert code == 2
        assert "key = value" in err


class TestEntryPoint:
    def test_module_invocation(self):
        result = subprocess.run(
            [sys.executable, "-m", "tachyon_selfforce.cli", "singular-betas",
             "--count", "1", "--digits", "16"],
            capture_output=True, text=True, timeout=120,
        )
        assert result.returncode == 0
        assert result.stdout.splitlines()[0] == "k,phi,beta"
