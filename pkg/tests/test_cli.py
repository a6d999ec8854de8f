"""Command-line interface: values, formats, exit codes, determinism."""

import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from radialift.cli import (EXIT_ERROR, EXIT_OK, EXIT_PARTIAL, main, parse_grid)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return [{"r": float(row["r"]), "value_re": float(row["value_re"]),
             "value_im": float(row["value_im"]),
             "error_estimate": float(row["error_estimate"]),
             "method": row["method"]} for row in rows]


def test_grid_parsing():
    assert np.allclose(parse_grid("0.5:2:4:linear"), [0.5, 1.0, 1.5, 2.0])
    assert np.allclose(parse_grid("1:1:1"), [1.0])
    assert np.allclose(parse_grid("1:100:3:log"), [1.0, 10.0, 100.0])
    with pytest.raises(ValueError):
        parse_grid("1:2")
    with pytest.raises(ValueError):
        parse_grid("1:2:3:weird")


def test_transform_gaussian_grid(capsys):
    code, out, _ = run_cli(capsys, "transform", "--profile",
                           "exp(-3.14159265358979*s^2)", "--dim", "3",
                           "--grid", "0.5:2:4:linear")
    assert code == EXIT_OK
    rows = read_csv(out)
    assert [row["r"] for row in rows] == [0.5, 1.0, 1.5, 2.0]
    for row in rows:
        assert abs(row["value_re"] - math.exp(-math.pi * row["r"] ** 2)) < 1e-7
        assert row["method"] == "direct"


def test_transform_sech_value(capsys):
    code, out, _ = run_cli(capsys, "transform", "--profile",
                           "sech(3.14159265358979*s)", "--dim", "1",
                           "--grid", "1:1:1")
    assert code == EXIT_OK
    row = read_csv(out)[0]
    assert abs(row["value_re"] - 1.0 / math.cosh(math.pi)) < 1e-7
    assert f"{row['value_re']:.6f}" == "0.086267"


def test_transform_syntax_error(capsys):
    code, out, err = run_cli(capsys, "transform", "--profile", "sech(",
                             "--dim", "1", "--grid", "1:1:1")
    assert code == EXIT_ERROR
    assert "offset 5" in err


def test_transform_gate_failure_exits_hard(capsys):
    code, _, err = run_cli(capsys, "transform", "--profile", "1",
                           "--dim", "3", "--grid", "1:1:1")
    assert code == EXIT_ERROR
    assert "tail" in err


def test_transform_partial_convergence_exit(capsys):
    # an oscillation budget far too small for the integrand forces a
    # converged=False record and the partial exit code
    code, out, _ = run_cli(capsys, "transform", "--profile", "exp(-pi*s^2)",
                           "--dim", "1", "--grid", "1:1:1",
                           "--max-oscillations", "2")
    assert code == EXIT_PARTIAL
    assert read_csv(out)[0]["error_estimate"] > 0


def test_lift_sech(capsys):
    code, out, _ = run_cli(capsys, "lift", "--profile", "sech(pi*s)",
                           "--from", "1", "--to", "3", "--grid", "1:1:1")
    assert code == EXIT_OK
    row = read_csv(out)[0]
    closed = 0.5 / math.cosh(math.pi) * math.tanh(math.pi)
    assert abs(row["value_re"] - closed) < 1e-12
    assert row["method"] == "lift-analytic"


def test_lift_parity_error(capsys):
    code, _, err = run_cli(capsys, "lift", "--profile", "sech(pi*s)",
                           "--from", "1", "--to", "4", "--grid", "1:1:1")
    assert code == EXIT_ERROR
    assert "even" in err


def test_lift_gaussian_corollary(capsys):
    code, out, _ = run_cli(capsys, "lift", "--profile", "exp(-pi*s^2)",
                           "--from", "2", "--to", "6", "--grid", "1:1:1")
    assert code == EXIT_OK
    row = read_csv(out)[0]
    assert abs(row["value_re"] - math.exp(-math.pi)) < 1e-9
    assert row["method"] == "corollary"


def test_lift_engine_flags(capsys):
    for engine, tag, tol in (("chebyshev", "lift-chebyshev", 1e-8),
                             ("fd", "lift-fd", 1e-7)):
        code, out, _ = run_cli(capsys, "lift", "--profile", "exp(-pi*s^2)",
                               "--from", "1", "--to", "3", "--grid", "1:1:1",
                               "--engine", engine)
        assert code == EXIT_OK
        row = read_csv(out)[0]
        assert row["method"] == tag
        assert abs(row["value_re"] - math.exp(-math.pi)) < tol


def test_kernel_resolvent_g5(capsys):
    code, out, _ = run_cli(capsys, "kernel", "--resolvent", "-1", "--dim", "5",
                           "--grid", "1:1:1")
    assert code == EXIT_OK
    row = read_csv(out)[0]
    assert abs(row["value_re"] - math.exp(-1) / (4 * math.pi ** 2)) < 1e-12
    assert row["method"] == "catalog"


def test_kernel_projection_p3(capsys):
    code, out, _ = run_cli(capsys, "kernel", "--projection", "1", "--dim", "3",
                           "--grid", "3.14159:3.14159:1")
    assert code == EXIT_OK
    row = read_csv(out)[0]
    assert abs(row["value_re"] - 1.0 / (2 * math.pi ** 4)) < 1e-7


def test_kernel_branch_error(capsys):
    code, _, err = run_cli(capsys, "kernel", "--resolvent", "2", "--dim", "3",
                           "--grid", "1:1:1")
    assert code == EXIT_ERROR
    assert "nonnegative real axis" in err


def test_kernel_complex_z(capsys):
    # the --flag=value form keeps argparse from reading -2+1i as an option
    code, out, _ = run_cli(capsys, "kernel", "--resolvent=-2+1i", "--dim", "3",
                           "--grid", "1:1:1")
    assert code == EXIT_OK
    row = read_csv(out)[0]
    assert row["value_im"] != 0.0


def test_kernel_heat(capsys):
    code, out, _ = run_cli(capsys, "kernel", "--heat", "1", "--dim", "3",
                           "--grid", "1:1:1")
    assert code == EXIT_OK
    row = read_csv(out)[0]
    assert abs(row["value_re"] - (4 * math.pi) ** -1.5 * math.exp(-0.25)) < 1e-15


def test_coeffs_values(capsys):
    for k, expect in ((1, "-1"), (2, "-1, 1"), (3, "-3, 3, -1")):
        code, out, _ = run_cli(capsys, "coeffs", str(k))
        assert code == EXIT_OK
        assert out.strip() == expect


def test_csv_roundtrip_exact(capsys):
    code, out, _ = run_cli(capsys, "transform", "--profile", "exp(-pi*s^2)",
                           "--dim", "2", "--grid", "0.5:1.5:3")
    rows = read_csv(out)
    # repr-formatted floats parse back bit-identically
    buf = io.StringIO(out)
    raw = list(csv.DictReader(buf))
    for row, parsed in zip(raw, rows):
        assert float(row["value_re"]) == parsed["value_re"]
        assert repr(parsed["value_re"]) == row["value_re"]


def test_json_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "transform", "--profile", "exp(-pi*s^2)",
                           "--dim", "2", "--grid", "0.5:1.5:3",
                           "--format", "json")
    assert code == EXIT_OK
    records = json.loads(out)
    assert len(records) == 3
    assert set(records[0]) == {"r", "value_re", "value_im", "error_estimate",
                               "method"}
    again = json.loads(json.dumps(records))
    assert again == records


def test_out_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out, _ = run_cli(capsys, "transform", "--profile", "exp(-pi*s^2)",
                           "--dim", "1", "--grid", "1:1:1",
                           "--out", str(target))
    assert code == EXIT_OK
    assert out == ""
    rows = read_csv(target.read_text())
    assert abs(rows[0]["value_re"] - math.exp(-math.pi)) < 1e-8


def test_deterministic_output(capsys):
    args = ("transform", "--profile", "sech(3.14159265358979*s)", "--dim", "3",
            "--grid", "0.5:2:4")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second
    args = ("verify", "coeffs")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_verify_suites(capsys):
    code, out, _ = run_cli(capsys, "verify", "coeffs")
    assert code == EXIT_OK
    assert "PASS coeffs.oracle-equality" in out
    code, out, _ = run_cli(capsys, "verify", "bessel")
    assert code == EXIT_OK
    assert "PASS bessel.derivative-identity" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "radialift", "coeffs", "3"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "-3, 3, -1"
