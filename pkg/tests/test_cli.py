from __future__ import annotations

import csv
import json

import pytest

from cantormarkov.cli import main


def _run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def test_enumerate_writes_json_and_csv(tmp_path, capsys):
    assert _run(tmp_path, "enumerate", "--prefix", "1", "--length", "4") == 0
    data = json.loads((tmp_path / "enumerate.json").read_text())
    assert data["command"] == "enumerate" and data["passed"]
    with open(tmp_path / "enumerate_words.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 7
    assert "PASS" in capsys.readouterr().out


def test_pressure_tower(tmp_path):
    assert _run(tmp_path, "pressure", "--mode", "tower", "--nmax", "12") == 0
    assert (tmp_path / "pressure_pressure.csv").exists()


def test_failing_condition_exits_one(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("model.height_base = 0.6\n")
    assert _run(tmp_path, "verify", "--config", str(cfg)) == 1
    assert "FAIL H5" in capsys.readouterr().out


def test_config_errors_exit_two(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("model.unknown = 1\n")
    assert _run(tmp_path, "verify", "--config", str(cfg)) == 2
    assert _run(tmp_path, "verify", "--config", str(tmp_path / "missing.cfg")) == 2


def test_unknown_flag_exits_two(tmp_path):
    with pytest.raises(SystemExit) as err:
        _run(tmp_path, "verify", "--bogus")
    assert err.value.code == 2


def test_randomized_command_records_seed(tmp_path):
    assert _run(tmp_path, "simulate", "--seed", "5", "--steps", "1064", "--samples", "16") in (0, 1)
    data = json.loads((tmp_path / "simulate.json").read_text())
    assert data["seed"] == 5
    assert (tmp_path / "simulate_histogram.csv").exists()


def test_degenerate_clt_fails(tmp_path):
    with pytest.warns(UserWarning):
        code = _run(tmp_path, "clt", "--f", "zero", "--steps", "164", "--samples", "8")
    assert code == 1


def test_spectrum_tower(tmp_path):
    assert _run(tmp_path, "spectrum", "--operator", "tower", "--return-cap", "30") == 0
    assert (tmp_path / "spectrum_decay.csv").exists()
