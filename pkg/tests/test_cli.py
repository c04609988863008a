import json

import numpy as np
import pytest

from ionparity import cli
from ionparity.checks import CheckResult


def run_cli(*argv) -> int:
    return cli.main(list(argv))


def read(path) -> str:
    return path.read_text(encoding="utf-8")


def test_dynamics_single_point_is_initial_condition(tmp_path):
    out = tmp_path / "dyn.csv"
    code = run_cli(
        "dynamics", "--n", "9", "--t-max", "0", "--t-steps", "1", "--out", str(out)
    )
    assert code == 0
    lines = [l for l in read(out).splitlines() if not l.startswith("#")]
    assert lines[0] == "gt,t_seconds,p_ground,entropy"
    gt, t, p, s = lines[1].split(",")
    assert float(gt) == 0.0 and float(t) == 0.0
    assert float(p) == 1.0 and float(s) == 0.0


def test_dynamics_csv_layout_and_metadata(tmp_path):
    out = tmp_path / "dyn.csv"
    assert run_cli("dynamics", "--t-steps", "11", "--out", str(out)) == 0
    text = read(out)
    header = [l for l in text.splitlines() if l.startswith("#")]
    assert any(l.startswith("# command=dynamics") for l in header)
    assert any(l.startswith("# n=9") for l in header)
    assert any(l.startswith("# g=1.0000000000000000e+05") for l in header)
    rows = [l for l in text.splitlines() if not l.startswith("#")][1:]
    assert len(rows) == 11
    gts = [float(r.split(",")[0]) for r in rows]
    assert gts == sorted(gts)
    assert gts[-1] == pytest.approx(10.0)


def test_dynamics_json_structure(tmp_path):
    out = tmp_path / "dyn.json"
    assert run_cli(
        "dynamics", "--t-steps", "3", "--t-max", "2", "--format", "json", "--out", str(out)
    ) == 0
    payload = json.loads(read(out))
    assert payload["config"]["command"] == "dynamics"
    assert payload["columns"] == ["gt", "t_seconds", "p_ground", "entropy"]
    assert len(payload["records"]) == 3
    assert payload["records"][0]["p_ground"] == 1.0


def test_tau_sweep_values_and_order(tmp_path):
    out = tmp_path / "tau.csv"
    code = run_cli(
        "tau-sweep", "--tau-min", "1e-9", "--tau-max", "1e-7", "--tau-steps", "5",
        "--out", str(out),
    )
    assert code == 0
    rows = [l.split(",") for l in read(out).splitlines() if not l.startswith("#")][1:]
    taus = [float(r[0]) for r in rows]
    assert taus == sorted(taus)
    deltas = [float(r[1]) for r in rows]
    assert deltas[0] > 10.0 * deltas[-1]  # strong decay across the sweep
    assert all(float(r[2]) - float(r[3]) == pytest.approx(d) for r, d in zip(rows, deltas))


def test_tau_sweep_with_preparation(tmp_path):
    out = tmp_path / "tau_prep.csv"
    code = run_cli(
        "tau-sweep", "--tau-steps", "2", "--eta-prep", "0.9", "--out", str(out)
    )
    assert code == 0
    header = read(out).splitlines()
    assert any(l.startswith("# eta_prep=") for l in header)


def test_eta_sweep_grid_order(tmp_path):
    out = tmp_path / "eta.csv"
    code = run_cli(
        "eta-sweep", "--tau", "1e-9", "1e-8", "--eta-min", "0.5", "--eta-max", "1.0",
        "--eta-steps", "3", "--out", str(out),
    )
    assert code == 0
    rows = [l.split(",") for l in read(out).splitlines() if not l.startswith("#")][1:]
    assert len(rows) == 6
    assert [float(r[0]) for r in rows] == [1e-9] * 3 + [1e-8] * 3
    assert [float(r[1]) for r in rows[:3]] == pytest.approx([0.5, 0.75, 1.0])


def test_eta_sweep_visibility_grows_with_efficiency(tmp_path):
    out = tmp_path / "eta2.csv"
    assert run_cli(
        "eta-sweep", "--tau", "1e-9", "--eta-min", "0.5", "--eta-max", "1.0",
        "--eta-steps", "6", "--out", str(out),
    ) == 0
    rows = [l.split(",") for l in read(out).splitlines() if not l.startswith("#")][1:]
    deltas = [float(r[2]) for r in rows]
    assert deltas[-1] > deltas[0]


def test_byte_identical_reruns(tmp_path):
    out = tmp_path / "mc.csv"
    args = (
        "tau-sweep", "--mode", "mc", "--mc-samples", "2000", "--tau-steps", "4",
        "--seed", "123", "--out", str(out),
    )
    assert run_cli(*args) == 0
    first = out.read_bytes()
    assert run_cli(*args) == 0
    assert out.read_bytes() == first

    out_json = tmp_path / "dyn.json"
    args = ("dynamics", "--t-steps", "50", "--format", "json", "--out", str(out_json))
    assert run_cli(*args) == 0
    first = out_json.read_bytes()
    assert run_cli(*args) == 0
    assert out_json.read_bytes() == first


def test_worker_count_does_not_change_rows(tmp_path):
    out1, out2 = tmp_path / "w1.csv", tmp_path / "w2.csv"
    base = ("tau-sweep", "--tau-steps", "7", "--mode", "mc", "--mc-samples", "1000")
    assert run_cli(*base, "--workers", "1", "--out", str(out1)) == 0
    assert run_cli(*base, "--workers", "8", "--out", str(out2)) == 0
    body1 = [l for l in read(out1).splitlines() if not l.startswith("# workers")]
    body2 = [l for l in read(out2).splitlines() if not l.startswith("# workers")]
    assert body1 == body2


def test_config_file_precedence(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"n": 5, "t_steps": 4}))
    out = tmp_path / "dyn.csv"
    assert run_cli(
        "dynamics", "--config", str(config), "--t-steps", "6", "--out", str(out)
    ) == 0
    header = read(out).splitlines()
    assert any(l.startswith("# n=5") for l in header)        # from the file
    assert any(l.startswith("# t_steps=6") for l in header)  # flag wins


def test_parameter_errors_exit_one(tmp_path, capsys):
    assert run_cli("tau-sweep", "--n", "10") == 1  # parity sweep needs odd n
    assert run_cli("dynamics", "--no-such-flag") == 1
    assert run_cli("tau-sweep", "--eta-prep", "0.9", "--delta", "0.5") == 1
    assert run_cli("eta-sweep", "--eta-min", "0", "--eta-max", "1") == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli("dynamics", "--config", str(bad)) == 1
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"nope": 1}))
    assert run_cli("dynamics", "--config", str(unknown)) == 1
    assert run_cli() == 1


def test_io_errors_exit_three(tmp_path):
    assert run_cli("dynamics", "--config", str(tmp_path / "missing.json")) == 3
    assert run_cli("dynamics", "--out", str(tmp_path / "no_dir" / "x.csv")) == 3


def test_validate_report_and_exit_codes(tmp_path, monkeypatch):
    passing = [CheckResult("alpha", 1e-12, 1e-8, True)]
    monkeypatch.setattr(cli.checks, "run_all", lambda **kwargs: passing)
    out = tmp_path / "report.csv"
    assert run_cli("validate", "--out", str(out)) == 0
    rows = [l for l in read(out).splitlines() if not l.startswith("#")]
    assert rows[0] == "check,measured,bound,passed"
    assert rows[1].startswith("alpha,") and rows[1].endswith(",true")

    failing = passing + [CheckResult("beta", 0.5, 1e-8, False)]
    monkeypatch.setattr(cli.checks, "run_all", lambda **kwargs: failing)
    assert run_cli("validate", "--out", str(out)) == 2
    assert "beta,5.0000000000000000e-01,1.0000000000000000e-08,false" in read(out)


def test_coupling_derived_from_drive(tmp_path):
    out = tmp_path / "dyn.csv"
    assert run_cli(
        "dynamics", "--omega", "2e7", "--eta-ld", "0.05", "--t-steps", "2",
        "--out", str(out),
    ) == 0
    g_line = next(l for l in read(out).splitlines() if l.startswith("# g="))
    derived = 2e7 * 0.05**2 * np.exp(-(0.05**2) / 2.0)
    assert float(g_line.split("=")[1]) == pytest.approx(derived, rel=1e-12)


def test_inconsistent_coupling_triple_rejected():
    assert run_cli("dynamics", "--g", "123.0", "--omega", "2e7", "--eta-ld", "0.05") == 1


def test_float_cells_carry_seventeen_significant_digits(tmp_path):
    out = tmp_path / "dyn.csv"
    assert run_cli("dynamics", "--t-steps", "2", "--t-max", "1", "--out", str(out)) == 0
    row = [l for l in read(out).splitlines() if not l.startswith("#")][2]
    mantissa = row.split(",")[2].split("e")[0]
    assert len(mantissa.split(".")[1]) == 16


def test_help_exits_zero(capsys):
    assert run_cli("--help") == 0
    capsys.readouterr()
