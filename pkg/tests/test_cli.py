import csv
import io
import json
import math

import numpy as np
import pytest

from entanglab.cli import SCAN_HEADER, fmt, main, parse_energy


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def spectrum_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    footer = dict(ln[2:].split(",") for ln in text.splitlines() if ln.startswith("# ") and "," in ln)
    return np.array([float(r["eigenvalue"]) for r in rows]), footer


def test_entropy_json(capsys):
    code, out, _ = run(capsys, "entropy", "--lambda", "10", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    rep = doc["report"]
    for key in ("lambda", "lambda_eff", "trace_A", "trace_B", "S_diag_A", "S_diag_B",
                "S_spec_A", "S_spec_B", "bounds", "checks", "errors", "ok"):
        assert key in rep
    assert rep["ok"] is True and rep["errors"] == []


def test_x0_matches_reduced_lambda(capsys):
    _, half, _ = run(capsys, "entropy", "--lambda", "10", "--x0", "0.5")
    _, five, _ = run(capsys, "entropy", "--lambda", "5")
    a, b = json.loads(half)["report"], json.loads(five)["report"]
    for key in ("S_diag_A", "S_diag_B", "S_spec_A", "S_spec_B", "trace_A", "trace_B"):
        assert a[key] == pytest.approx(b[key], rel=1e-12)
    assert a["bounds"] == pytest.approx(b["bounds"], rel=1e-12)


@pytest.mark.parametrize(
    "argv",
    [["entropy", "--lambda", "-1"], ["entropy", "--lambda", "abc"], ["entropy"],
     ["entropy", "--lambda", "1", "--x0", "2"], ["spectrum", "--lambda", "1", "--nodes", "1"],
     ["scan", "--lambda-min", "10", "--lambda-max", "5"]],
)
def test_usage_errors(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse rejects before dispatch
        code = exc.code
    assert code == 2
    assert "error" in capsys.readouterr().err


SCAN = ["scan", "--lambda-min", "10", "--lambda-max", "40", "--points", "3", "--nodes", "60"]


def test_scan_csv_stable_and_deterministic(capsys):
    _, first, _ = run(capsys, *SCAN)
    _, second, _ = run(capsys, *SCAN)
    assert first == second
    body = [ln for ln in first.splitlines() if not ln.startswith("#")]
    assert body[0] == ",".join(SCAN_HEADER)
    assert body[0] == ("lambda,S_diag_A,S_diag_B,S_spec_A,S_spec_B,bound_leading,"
                       "bound_subleading,bound_intermediate,trace_err_A,trace_err_B,flags")
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    lams = [float(r["lambda"]) for r in rows]
    assert lams == sorted(lams) and len(lams) == 3
    assert all(r["flags"] == "ok" for r in rows)
    fit = dict(ln[6:].split("=", 1) for ln in first.splitlines() if ln.startswith("# fit "))
    assert abs(float(fit["leading_slope"]) - 2) < 1e-12


def test_scan_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, *SCAN)
    _, parallel, _ = run(capsys, *SCAN, "--jobs", "2")
    assert serial == parallel


def test_scan_json(capsys):
    code, out, _ = run(capsys, "scan", "--lambda-min", "100", "--lambda-max", "1000",
                       "--points", "4", "--nodes", "20", "--format", "json", "--mode", "asym")
    doc = json.loads(out)
    assert code == 0 and [r["lambda"] for r in doc["rows"]][0] == 100.0
    assert abs(doc["fit"]["leading_slope"] - 2) < 1e-12


def test_spectrum_csv(capsys):
    _, out_a, _ = run(capsys, "spectrum", "--lambda", "10", "--region", "A")
    _, out_b, _ = run(capsys, "spectrum", "--lambda", "10", "--region", "B")
    a, foot_a = spectrum_rows(out_a)
    b, _ = spectrum_rows(out_b)
    assert len(a) == 200 and np.all(a >= 0) and np.all(np.diff(a) <= 0)
    assert abs(float(foot_a["sum"]) - 1) < 1e-6
    assert np.all(np.abs(a[:20] - b[:20]) <= 1e-5)
    assert float(foot_a["entropy"]) >= 0


def test_spectrum_jacobi_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--lambda", "10", "--nodes", "30",
                       "--solver", "jacobi", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["eigenvalues"]) == 30


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--lambda", "30")
    d = json.loads(out)
    assert code == 0
    assert d["leading"] == 300.0
    assert d["subleading"] == pytest.approx(280.300195271207851622, rel=1e-14)


def test_physical_electron(capsys):
    code, out, _ = run(capsys, "physical", "--m", "electron", "--E", "13.6eV", "--R", "1")
    d = json.loads(out)
    assert code == 0
    assert f"{d['scenario']['eta']:.2g}" == "9.9e-51"
    assert d["holographic"]["stronger_than_holographic"] is True


def test_physical_gamma_mode(capsys):
    code, out, _ = run(capsys, "physical", "--gamma", "1", "--R-over-lp", "10")
    assert code == 0
    assert json.loads(out)["scenario"]["lambda"] == pytest.approx(10.0, rel=1e-12)


def test_physical_missing_suffix(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["physical", "--m", "electron", "--E", "13.6", "--R", "1"])
    assert exc.value.code == 2
    assert "unit suffix" in capsys.readouterr().err


def test_physical_bad_constants_file(capsys, tmp_path):
    f = tmp_path / "k.txt"
    f.write_text("hbar=1e-34\nbogus\n")
    code, _, err = run(capsys, "physical", "--m", "electron", "--E", "1eV", "--R", "1",
                       "--constants", str(f))
    assert code == 2 and ":2:" in err


def test_parse_energy_units():
    assert parse_energy("1keV") == pytest.approx(1e3 * parse_energy("1eV"))
    assert parse_energy("2 J") == 2.0


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest")
    last = out.strip().splitlines()[-1]
    n = len(out.strip().splitlines()) - 1
    assert code == 0 and last == f"PASS {n}/{n}"


@pytest.mark.slow
def test_selftest_full(capsys):
    code, out, _ = run(capsys, "selftest", "--level", "full")
    assert code == 0 and out.strip().splitlines()[-1].startswith("PASS")
    assert "lambda=50" in out


def test_out_file(capsys, tmp_path):
    path = tmp_path / "b.csv"
    code, out, _ = run(capsys, "bound", "--lambda", "12", "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    rows = dict(csv.reader(io.StringIO(path.read_text())))
    assert float(rows["leading"]) == 48.0


@pytest.mark.parametrize("v", [math.pi, 1 / 3, 2.0**-1074, 1e308, 0.1 + 0.2])
def test_float_round_trip(v):
    assert float(fmt(v)) == v
