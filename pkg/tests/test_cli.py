import json
import subprocess
import sys

import numpy as np
import pytest

from xxbell.bell import ZB4, OptimizerConfig, maximize_bell
from xxbell.cli import main
from xxbell.output import RunSpec, format_value, read_csv, render_csv, runspec_path
from xxbell.spectral import canonical_eigensystem_n4


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def test_spectrum_four_sites(tmp_path):
    code, out = run(tmp_path, "spectrum", "--sites", "4", "--field", "0")
    assert code == 0
    rows = read_csv(out)
    values = [float(r["eigenvalue"]) for r in rows]
    assert len(rows) == 16 and min(values) == -4 and max(values) == 4
    assert rows[0]["label"] == "5"
    record = json.loads(runspec_path(out).read_text())
    assert record["command"] == "spectrum" and record["n_sites"] == 4


def test_spectrum_two_sites(tmp_path):
    code, out = run(tmp_path, "spectrum", "--sites", "2")
    assert code == 0
    assert [float(r["eigenvalue"]) for r in read_csv(out)] == [-1.0, 0.0, 0.0, 1.0]
    assert "label" not in read_csv(out)[0]


def test_spectrum_writes_runspec_to_stderr(capsys):
    assert main(["spectrum", "--sites", "3"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("index,eigenvalue\r\n")
    assert json.loads(captured.err)["n_sites"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--sites", "1"],
        ["bogus"],
        ["spectrum", "--sites", "four"],
        ["bell-curve", "--tmin", "2", "--tmax", "1"],
        ["bell-curve", "--starts", "0"],
        ["threshold", "--tstep", "-1"],
        ["eigenstate-bell", "--index", "16"],
        ["eigenstate-bell", "--family", "quadruple"],
        ["eigenstate-bell"],
        ["spectrum", "--spec", "/nonexistent/run.json"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_computation_error_exits_two(tmp_path):
    # a violation that persists to the scan end is a computation failure
    code, _ = run(tmp_path, "threshold", "--sites", "2", "--tmin", "0.1", "--tmax", "0.3", "--tstep", "0.1")
    assert code == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "s.csv"
    proc = subprocess.run([sys.executable, "-m", "xxbell", "spectrum", "--sites", "2", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and out.exists()
    bad = subprocess.run([sys.executable, "-m", "xxbell", "spectrum", "--sites", "1"], capture_output=True)
    assert bad.returncode == 1


def test_eigenstate_bell_examples(tmp_path):
    code, out = run(tmp_path, "eigenstate-bell", "--index", "0,5")
    assert code == 0
    rows = {r["target"]: r for r in read_csv(out)}
    assert float(rows["0"]["bell_max"]) == pytest.approx(4.0, abs=1e-6)
    assert float(rows["5"]["bell_max"]) == pytest.approx(7.917, abs=1e-3)


def test_eigenstate_bell_family(tmp_path):
    code, out = run(tmp_path, "eigenstate-bell", "--family", "double-excitation")
    assert code == 0
    (row,) = read_csv(out)
    assert float(row["bell_max"]) == pytest.approx(8.485, abs=1e-2)
    assert [k for k in row if k.startswith("alpha_")] == [f"alpha_{k}" for k in range(1, 6)]


def test_csv_round_trips_library_values(tmp_path):
    code, out = run(tmp_path, "eigenstate-bell", "--index", "7", "--starts", "8", "--seed", "5")
    assert code == 0
    report = maximize_bell(canonical_eigensystem_n4(0.0).projector(7), ZB4, OptimizerConfig(starts=8, seed=5))
    (row,) = read_csv(out)
    expected = [report.best_value] + list(report.best_settings.reshape(-1))
    parsed = [float(row["bell_max"])] + [float(row[f"theta_{n}_{s}"]) for n in range(1, 5) for s in (1, 2)]
    # the file holds exactly the 12-significant-digit rendering of each value
    assert [format_value(float(v)) for v in expected] == [format_value(p) for p in parsed]
    np.testing.assert_allclose(parsed, expected, rtol=1e-11, atol=1e-300)


def test_runs_are_byte_identical(tmp_path):
    argv = ["bell-curve", "--sites", "4", "--field", "0.3", "--tmin", "0.1", "--tmax", "1", "--steps", "6"]
    _, a = run(tmp_path, *argv, name="a.csv")
    _, b = run(tmp_path, *argv, name="b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_spec_file_reproduces_run(tmp_path):
    _, first = run(tmp_path, "bell-curve", "--sites", "2", "--tmin", "0.2", "--tmax", "1", "--steps", "5",
                   "--seed", "7", name="first.csv")
    spec = runspec_path(first)
    _, second = run(tmp_path, "bell-curve", "--spec", str(spec), name="second.csv")
    assert first.read_bytes() == second.read_bytes()
    # explicit flags override the record
    _, third = run(tmp_path, "bell-curve", "--spec", str(spec), "--steps", "3", name="third.csv")
    assert len(read_csv(third)) == 3


def test_bell_curve_crosses_bound(tmp_path):
    code, out = run(tmp_path, "bell-curve", "--sites", "4", "--field", "0",
                    "--tmin", "0.05", "--tmax", "2", "--steps", "100")
    assert code == 0
    rows = read_csv(out)
    temps = np.array([float(r["temperature"]) for r in rows])
    viol = np.array([r["violation"] == "true" for r in rows])
    assert viol[0] and not viol[-1]
    last = temps[viol].max()
    assert 0.6 < last < 0.65


def test_bell_curve_strong_field_and_three_sites(tmp_path):
    _, out = run(tmp_path, "bell-curve", "--sites", "4", "--field", "1.5", "--steps", "20", name="b15.csv")
    assert all(float(r["bell_max"]) <= 4 for r in read_csv(out))
    _, out = run(tmp_path, "bell-curve", "--sites", "3", "--steps", "5", name="n3.csv")
    assert all(float(r["bell_max"]) == 0 and r["violation"] == "false" for r in read_csv(out))


def test_bell_curve_several_fields_and_plot(tmp_path):
    plot = tmp_path / "curve.svg"
    code, out = run(tmp_path, "bell-curve", "--fields", "0,1", "--steps", "4", "--plot", str(plot))
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["field", "temperature", "bell_max", "violation"]
    assert {r["field"] for r in rows} == {"0", "1"}
    svg = plot.read_text()
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg


def test_threshold_zero_field(tmp_path):
    code, out = run(tmp_path, "threshold", "--sites", "4", "--field", "0")
    assert code == 0
    (row,) = read_csv(out)
    assert float(row["threshold"]) == pytest.approx(0.626, abs=0.01)


def test_field_sweep_empty_cell_for_none(tmp_path):
    code, out = run(tmp_path, "field-sweep", "--fields", "0.5,1.0", "--plot", str(tmp_path / "t0.svg"))
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == {"field": "0.5", "threshold": ""}
    assert float(rows[1]["threshold"]) == pytest.approx(0.467, abs=0.01)
    assert (tmp_path / "t0.svg").exists()


def test_format_and_runspec_helpers():
    assert format_value(-0.0) == "0"
    assert format_value(None) == ""
    assert format_value(True) == "true"
    assert format_value(1 / 3) == "0.333333333333"
    assert render_csv(["a"], [[1.5]]) == "a\r\n1.5\r\n"
    spec = RunSpec("spectrum", n_sites=4, field=0.0)
    assert RunSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ValueError):
        RunSpec.from_json('{"command": "spectrum", "color": "red"}')
