import csv
import json
import subprocess
import sys

import pytest

from qclab.cli import ConfigError, main, parse_config


def _write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg) if not isinstance(cfg, str) else cfg)
    return str(path)


def test_list_shows_anchors(capsys):
    assert main(["list"]) == 0
    lines = {line.split()[0]: line.split(None, 1)[1].strip() for line in capsys.readouterr().out.splitlines()}
    assert len(lines) == 9
    assert lines["w0-sharpness"] == "Theorem 1 sharpness"
    assert lines["fkp-smirnov"] == "Theorem 3 / Lemma 4.5"
    assert lines["theorem2-trend"] == "Theorem 3.5 Eq. (3.10)"


def test_bootstrap_run_writes_csv(tmp_path):
    cfg = _write(tmp_path, {"scenario": "bootstrap", "params": {"q0": "5/2"}})
    out = tmp_path / "out"
    assert main(["run", cfg, "--out", str(out)]) == 0
    rows = list(csv.reader(open(next(out.glob("bootstrap__*.csv")))))
    assert rows[1] == ["2.5", "3.333333", "10.0"]
    report = json.loads((out / "report.json").read_text())
    sc = report["scenarios"]["bootstrap"]
    assert report["passed"] and sc["scalars"]["k0"] == 2
    assert (out / "timing.json").exists()


def test_w0_sharpness_flags(tmp_path):
    cfg = _write(tmp_path, {"scenario": "w0-sharpness", "params": {"a": 0.25}})
    out = tmp_path / "out"
    assert main(["run", cfg, "--out", str(out)]) == 0
    flags = json.loads((out / "report.json").read_text())["scenarios"]["w0-sharpness"]["flags"]
    for name in ("dilatation_bound", "L2_convergent", "L2.5_divergent", "non_lipschitz"):
        assert flags[name]["pass"], name
    assert list(out.glob("*.svg"))


@pytest.mark.parametrize("content", [
    "{not json",
    {"scenario": "no-such-scenario"},
    {"scenarios": 5},
    {"scenario": "bootstrap", "tolerances": {"doubling": -1}},
    {"scenario": "bootstrap", "seed": "x"},
    {},
])
def test_bad_configs_exit_2(tmp_path, content, capsys):
    assert main(["run", _write(tmp_path, content)]) == 2
    assert "config error" in capsys.readouterr().err


def test_missing_config_file_exits_2(tmp_path):
    assert main(["run", str(tmp_path / "absent.json")]) == 2


def test_bad_parameter_value_exits_2(tmp_path):
    cfg = _write(tmp_path, {"scenario": "bootstrap", "params": {"q0": "abc"}})
    assert main(["run", cfg, "--out", str(tmp_path / "o")]) == 2


def test_failing_flag_exits_1(tmp_path, capsys):
    cfg = _write(tmp_path, {"scenario": "w0-sharpness", "tolerances": {"witness": 100.0}})
    assert main(["run", cfg, "--out", str(tmp_path / "o")]) == 1
    assert "w0-sharpness.non_lipschitz" in capsys.readouterr().err


def test_domain_error_becomes_failing_flag(tmp_path):
    cfg = _write(tmp_path, {"scenario": "bootstrap", "params": {"q0": "8/3"}})
    out = tmp_path / "o"
    assert main(["run", cfg, "--out", str(out)]) == 1
    flags = json.loads((out / "report.json").read_text())["scenarios"]["bootstrap"]["flags"]
    assert not flags["completed"]["pass"]


def test_config_forms_and_seed_override(monkeypatch):
    assert parse_config({"scenarios": ["bootstrap", "w0-sharpness"]})["jobs"][1][0] == "w0-sharpness"
    cfg = parse_config({"scenarios": {"bootstrap": {"params": {"q0": 3}, "tolerances": {"doubling": 1e-9}}}})
    assert cfg["jobs"] == [("bootstrap", {"q0": 3}, {"doubling": 1e-9})]
    monkeypatch.setenv("QC_LAB_SEED", "77")
    assert parse_config({"scenario": "bootstrap", "seed": 3})["seed"] == 77
    monkeypatch.setenv("QC_LAB_SEED", "x")
    with pytest.raises(ConfigError):
        parse_config({"scenario": "bootstrap"})


def test_seed_override_reaches_report(tmp_path, monkeypatch):
    monkeypatch.setenv("QC_LAB_SEED", "11")
    cfg = _write(tmp_path, {"scenario": "bootstrap", "seed": 2})
    out = tmp_path / "o"
    main(["run", cfg, "--out", str(out)])
    assert json.loads((out / "report.json").read_text())["seed"] == 11


def test_reports_are_byte_identical(tmp_path):
    cfg = _write(tmp_path, {"scenarios": ["bootstrap", "green-solver", "composition-identities"], "seed": 5})
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", cfg, "--out", str(a)]) == 0
    assert main(["run", cfg, "--out", str(b), "--parallel"]) == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    for f in a.glob("*.csv"):
        assert f.read_bytes() == (b / f.name).read_bytes()


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "qclab", "list"], capture_output=True, text=True)
    assert res.returncode == 0 and "bootstrap" in res.stdout
