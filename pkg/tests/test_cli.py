"""Command-line surface: config resolution, exit codes, CSV determinism."""

import os

import numpy as np
import pytest

from singtool.cli import (ConfigError, RunConfig, load_config, main,
                          resolve_output_dir)


def test_defaults():
    cfg = load_config(None, {})
    assert cfg == RunConfig()
    assert cfg.eps_values() == [0.125, 0.0625, 0.03125, 0.015625, 0.0078125]


def test_file_then_overrides(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment line\n\ngrid_points = 128\ntol_beurling = 0.2\n")
    cfg = load_config(str(p), {"grid_points": "64"})
    assert cfg.grid_points == 64          # flag beats file
    assert cfg.tol_beurling == 0.2        # file beats default
    assert cfg.half_width == 8.0          # default survives


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(str(tmp_path / "missing.cfg"), {})
    bad = tmp_path / "bad.cfg"
    bad.write_text("grid_points 128\n")
    with pytest.raises(ConfigError, match="key = value"):
        load_config(str(bad), {})


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown config key"):
        load_config(None, {"gird_points": "128"})


def test_unparsable_value_rejected():
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config(None, {"grid_points": "many"})


@pytest.mark.parametrize("overrides,msg", [
    ({"grid_points": "17"}, "even"),
    ({"dim": "4"}, "dim"),
    ({"sweep_eps": "0.3"}, "below 0.25"),
    ({"sweep_eps": "0.1,-0.2"}, "positive"),
    ({"band_d_min": "0.5"}, "band_d_min"),
    ({"tol_beurling": "0"}, "positive"),
])
def test_validation_rejects(overrides, msg):
    with pytest.raises(ConfigError, match=msg):
        load_config(None, overrides)


def test_output_dir_env_wins(tmp_path, monkeypatch):
    target = tmp_path / "from_env"
    monkeypatch.setenv("SINGTOOL_OUT", str(target))
    out = resolve_output_dir(RunConfig(output_dir=str(tmp_path / "ignored")))
    assert out == target and target.is_dir()
    monkeypatch.delenv("SINGTOOL_OUT")
    out2 = resolve_output_dir(RunConfig(output_dir=str(tmp_path / "plain")))
    assert out2.name == "plain"


def _run(monkeypatch, tmp_path, args):
    monkeypatch.setenv("SINGTOOL_OUT", str(tmp_path))
    return main(args)


def test_exit_code_2_on_config_error(tmp_path, monkeypatch, capsys):
    rc = _run(monkeypatch, tmp_path,
              ["verify-beurling-identity", "--grid_points", "17"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err
    rc = _run(monkeypatch, tmp_path,
              ["verify-beurling-identity", "--config", str(tmp_path / "no.cfg")])
    assert rc == 2


def test_exit_code_2_on_bad_sweep_eps(tmp_path, monkeypatch, capsys):
    rc = _run(monkeypatch, tmp_path, ["run-counterexample", "--sweep_eps", "0.5"])
    assert rc == 2
    assert "below 0.25" in capsys.readouterr().err


FAST = ["verify-beurling-identity", "--grid_points", "64", "--tol_beurling", "0.5"]


def test_fast_beurling_run_passes(tmp_path, monkeypatch, capsys):
    rc = _run(monkeypatch, tmp_path, FAST)
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("PASS") == 5 and "FAIL" not in out
    csv_path = tmp_path / "verify_beurling_identity.csv"
    assert csv_path.is_file()
    header = csv_path.read_text().splitlines()[0]
    assert header == "route,n,x,y,abs_z,error"


def test_exit_code_1_on_breach(tmp_path, monkeypatch, capsys):
    rc = _run(monkeypatch, tmp_path,
              ["verify-beurling-identity", "--grid_points", "64",
               "--tol_beurling", "1e-9"])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out


def test_csv_bytes_deterministic(tmp_path, monkeypatch):
    a = tmp_path / "a"
    b = tmp_path / "b"
    _run(monkeypatch, a, FAST)
    _run(monkeypatch, b, FAST)
    fa = (a / "verify_beurling_identity.csv").read_bytes()
    fb = (b / "verify_beurling_identity.csv").read_bytes()
    assert fa == fb
    # shortest round-trip float formatting: values survive a parse cycle
    line = fa.decode().splitlines()[1].split(",")
    assert float(line[5]) == float(repr(float(line[5])))


def test_plots_flag_writes_svg(tmp_path, monkeypatch):
    pytest.importorskip("matplotlib")
    rc = _run(monkeypatch, tmp_path, FAST + ["--plots"])
    assert rc == 0
    svg = tmp_path / "beurling_refinement.svg"
    assert svg.is_file()
    head = svg.read_bytes()[:200]
    assert b"<svg" in head or b"<?xml" in head
