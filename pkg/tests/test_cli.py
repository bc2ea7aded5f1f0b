import csv
import io
import json
import subprocess
import sys

import pytest

from zetasurgery.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_det_cylinder_report(capsys):
    code, out, _ = run(capsys, "det-cylinder", "--length", "1.0")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"command", "config", "results", "seed"}
    assert doc["command"] == "det-cylinder"
    first = doc["results"][0]
    assert set(first) == {"name", "value", "error_bound", "expected", "tolerance", "pass"}
    assert first["value"] == pytest.approx(0.7018347192382576, abs=1e-12)


def test_zeta_values(capsys):
    code, out, _ = run(capsys, "zeta", "--s", "2.0")
    assert code == 0
    values = {r["name"]: r["value"] for r in json.loads(out)["results"]}
    assert values["zeta(0)"] == pytest.approx(-1.0, abs=1e-10)


def test_relative_det_routes_agree(capsys):
    code, out, _ = run(capsys, "relative-det", "--pair", "translate", "--shift", "1.0")
    assert code == 0
    results = json.loads(out)["results"]
    assert results[0]["value"] == pytest.approx(0.69812695090, abs=1e-10)
    assert results[1]["pass"]


def test_bfk_check_conventions(capsys):
    assert run(capsys, "bfk-check", "--cross-section", "torus", "--z", "0.3", "1.0")[0] == 0
    assert run(capsys, "bfk-check", "--cross-section", "torus", "--z", "0.3", "--convention", "minus")[0] == 1


def test_surgery_csv(capsys):
    code, out, _ = run(
        capsys, "surgery", "--law", "stretched-caps", "--shift", "1.0", "--format", "csv", "--grid", "1", "2", "4", "8"
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["r", "value", "error"]
    assert [float(r[0]) for r in rows[1:]] == [1.0, 2.0, 4.0, 8.0]


def test_unsupported_model_exits_two(capsys):
    code, _, err = run(capsys, "surgery", "--law", "two-cap-invertible")
    assert code == 2
    assert "error" in err


def test_bad_arguments_exit_two(capsys):
    assert run(capsys, "det-cylinder", "--length", "-1")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "det-cylinder", "--config", "/nonexistent/config.json")[0] == 2


def test_config_sets_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"length": 2.0, "cross-section": "point", "shift": 1.0}))
    code, out, _ = run(capsys, "det-cylinder", "--config", str(cfg))
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["length"] == 2.0
    assert doc["results"][0]["value"] == pytest.approx(2.0 * __import__("math").sinh(2.0), rel=1e-10)


def test_output_file_and_seed_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "scattering-check", "--trials", "50", "--seed", "3", "--output", str(a))[0] == 0
    assert run(capsys, "scattering-check", "--trials", "50", "--seed", "3", "--output", str(b))[0] == 0
    assert a.read_text() == b.read_text()
    assert json.loads(a.read_text())["seed"] == 3
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".report-")]


def test_oracle_1d(capsys):
    code, out, _ = run(capsys, "oracle-1d", "--potential", "well", "--z", "2.0", "--cuts", "0.4", "0.6")
    assert code == 0
    results = json.loads(out)["results"]
    assert results[1]["expected"] == 0.25


def test_acceptance_subset(capsys):
    code, out, err = run(capsys, "acceptance", "--only", "1", "9")
    assert code == 0
    assert "PASS criterion 1" in err and "PASS criterion 9" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zetasurgery", "zeta"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "zeta"
