import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from cvrealism import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def test_fig1_rows_and_special_point(capsys):
    code, out, _ = run(capsys, "fig1")
    assert code == 0 and "\r" not in out
    head, data = table(out)
    assert head == ["Delta_q", "eta_exact", "eta_approx"]
    assert np.all(np.diff(data[:, 0]) > 0)
    row = data[np.argmin(np.abs(data[:, 0] - 1 / np.sqrt(2)))]
    assert row[0] == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert row[1] == pytest.approx(0.9989, abs=5e-4)
    assert np.all(np.abs(data[data[:, 0] >= 1, 1] - 1) < 1e-3)
    code2, out2, _ = run(capsys, "fig1")
    assert out2 == out


def test_fig1_bad_range(capsys):
    code, _, err = run(capsys, "fig1", "--dq-min", "2", "--dq-max", "1")
    assert code == 2 and "dq-min" in err


def test_fig2_panel_a_moves_toward_origin(capsys):
    code, out, _ = run(capsys, "fig2", "--panel", "a", "--steps", "9", "--points", "401",
                       "--zeta", "0.5", "--tau-e", "10")
    assert code == 0
    head, data = table(out)
    assert head == ["Q", "tau", "density"]
    taus = np.unique(data[:, 1])
    first = data[data[:, 1] == taus[0]]
    last = data[data[:, 1] == taus[-1]]
    assert first[np.argmax(first[:, 2]), 0] == pytest.approx(-2.0, abs=0.03)
    assert abs(last[np.argmax(last[:, 2]), 0]) < 0.5


def test_fig2_panel_b_starts_with_unit_spread(capsys):
    code, out, _ = run(capsys, "fig2", "--panel", "b", "--steps", "3", "--points", "801")
    assert code == 0
    _, data = table(out)
    s = data[data[:, 1] == 0.0]
    x, w = s[:, 0], s[:, 2]
    dx = x[1] - x[0]
    assert np.sum(w) * dx == pytest.approx(1.0, abs=1e-6)
    assert np.sqrt(np.sum(w * x * x) * dx) == pytest.approx(1.0, abs=1e-6)


def test_fig2_unknown_panel(capsys):
    assert run(capsys, "fig2", "--panel", "c")[0] == 2


def test_irreality_uniform_and_gaussian(capsys):
    code, out, _ = run(capsys, "irreality", "--state", "uniform", "--width", "5")
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["results"][0]["difference"]) < 1e-10
    code, out, _ = run(capsys, "irreality", "--state", "gaussian", "--width", "4")
    assert abs(json.loads(out)["results"][0]["difference"]) < 1e-3


def test_irreality_outside_validity_still_succeeds(capsys):
    code, out, _ = run(capsys, "irreality", "--width", "0.5")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["validity"] is False
    assert doc["checks"][0]["passed"] is False


def test_irreality_bad_inputs(capsys):
    assert run(capsys, "irreality", "--state", "cat")[0] == 2
    assert run(capsys, "irreality", "--basis", "spin")[0] == 2


def test_ck_series(capsys):
    code, out, _ = run(capsys, "ck", "--zeta", "0.5", "--tau-max", "20", "--steps", "40")
    assert code == 0
    head, data = table(out)
    assert head == cli.CK_HEADER
    col = {h: data[:, i] for i, h in enumerate(head)}
    assert np.all(col["uncertainty"] >= 1 - 1e-12)
    late = col["tau"] >= 10
    slope = np.polyfit(col["tau"][late], col["d_irreality_sum"][late], 1)[0]
    assert slope == pytest.approx(1.0, rel=1e-3)
    assert col["c_zero"][0] == 0.0


def test_ck_with_oracle(capsys):
    code, out, _ = run(capsys, "ck", "--tau-max", "1", "--steps", "4", "--with-oracle",
                       "--dt", "2e-3")
    assert code == 0
    head, data = table(out)
    col = {h: data[:, i] for i, h in enumerate(head)}
    np.testing.assert_allclose(col["tdse_delta_q"], col["delta_q"], rtol=1e-4)
    np.testing.assert_allclose(col["tdse_delta_p"], col["delta_p"], rtol=1e-4)


def test_ck_epsilon_zeta_conflict(capsys):
    assert run(capsys, "ck", "--zeta", "0.5", "--epsilon", "3")[0] == 2
    assert run(capsys, "ck", "--zeta", "0.5", "--epsilon", "1.125", "--tau-e", "3",
               "--steps", "2")[0] == 0
    assert run(capsys, "ck", "--zeta", "1.5")[0] == 2


@pytest.mark.parametrize("lam", ["0", "-1"])
def test_bad_lambda(capsys, lam):
    code, _, err = run(capsys, "ck", "--lam", lam)
    assert code == 2 and "lam" in err


def test_pointer_command(capsys):
    code, out, _ = run(capsys, "pointer", "--steps", "8", "--with-oracle")
    assert code == 0
    head, data = table(out.replace("nan", "NaN"))
    col = {h: data[:, i] for i, h in enumerate(head)}
    assert col["entanglement"][0] == pytest.approx(0.0, abs=1e-9)
    assert col["entanglement"][-1] > 0.999
    ok = np.isfinite(col["oracle_purity"])
    assert ok[0] and not ok[-1]
    np.testing.assert_allclose(col["oracle_purity"][ok], col["purity"][ok], atol=1e-6)


def test_check_passes_and_is_seeded(capsys):
    code, out, _ = run(capsys, "check", "--seed", "3")
    doc = json.loads(out)
    assert code == 0 and doc["results"]["passed"]
    names = {c["name"] for c in doc["checks"]}
    assert {"projector_algebra", "uncertainty_slack_unbiased", "purity_oracle"} <= names
    assert min(doc["results"]["slacks"]) >= -1e-9
    _, again, _ = run(capsys, "check", "--seed", "3")
    assert json.loads(again)["results"]["slacks"] == doc["results"]["slacks"]


def test_check_reports_failures(capsys):
    code, out, _ = run(capsys, "check", "--tolerance-scale", "0")
    doc = json.loads(out)
    assert code == 1
    assert doc["results"]["failed"]
    assert set(doc["results"]["failed"]) <= {c["name"] for c in doc["checks"]}


def test_sweep_deterministic_across_workers(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "sweep", "--out", str(a))[0] == 0
    assert run(capsys, "sweep", "--workers", "8", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().strip().splitlines()) == 7
    rows = list(csv.DictReader(io.StringIO(a.read_text())))
    for r in rows:
        assert float(r["slope_over_2zeta"]) == pytest.approx(1.0, rel=1e-2)
        assert float(r["min_uncertainty"]) >= 1 - 1e-12


def test_sweep_rejects_fixed_axes(capsys):
    assert run(capsys, "sweep", "--zeta", "0.3")[0] == 2
    assert run(capsys, "sweep", "--zeta-values", "x")[0] == 2


def test_config_file_and_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# run settings\nzeta = 0.5\ntau_max = 2\nsteps = 4\nformat = json\n")
    code, out, _ = run(capsys, "--config", str(cfg), "ck")
    doc = json.loads(out)
    assert code == 0
    assert doc["config"]["zeta"] == 0.5 and len(doc["results"]) == 5
    code, out, _ = run(capsys, "--config", str(cfg), "ck", "--steps", "2")
    assert len(json.loads(out)["results"]) == 3


def test_config_file_errors(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("zeta 0.5\n")
    assert run(capsys, "--config", str(bad), "ck")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "missing.cfg"), "ck")[0] == 2


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "cvrealism", "fig1", "--dq-min", "1",
                          "--dq-max", "1"], capture_output=True, text=True, check=True)
    assert res.stdout.splitlines()[1].startswith("1,")


def test_json_echo_ignores_execution_settings(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "check", "--out", str(a))[0] == 0
    assert run(capsys, "check", "--workers", "4", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert "workers" not in json.loads(a.read_text())["config"]
