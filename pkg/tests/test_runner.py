import math
import os

import numpy as np
import pytest

from coupled_cats.cli import main
from coupled_cats.runner import (EntropySeries, ScenarioConfig, config_echo, emit_outputs,
                                 growth_rate, plateau, run_scenario, time_to_reach)


def small(**kw):
    base = dict(case="hh", dim=8, steps=4)
    base.update(kw)
    return ScenarioConfig(**base)


@pytest.mark.parametrize("kw", [
    dict(case="xx"), dict(dim=1), dict(dim=129), dict(steps=-1), dict(cse_stride=0),
    dict(subsample=0), dict(snapshot_times=(5,), steps=4), dict(order="both"), dict(nc=1),
    dict(classical_steps=-2),
])
def test_config_rejects_misconfiguration(kw):
    with pytest.raises(ValueError):
        small(**kw)


@pytest.mark.parametrize("case,maps", [
    ("hh", ("h", "h")), ("ee", ("e", "e")), ("he", ("h", "e")), ("eh", ("e", "h")),
])
def test_case_selects_maps(case, maps):
    cm = small(case=case).coupled_map()
    kinds = tuple("h" if m.m11 == 2 else "e" for m in (cm.map1, cm.map2))
    assert kinds == maps
    assert cm.map1.kick == 0.25 and cm.kc == 0.5


def test_stride_schedule():
    cfg = small(steps=30, cse_stride=5, cse_dense_until=3, classical_steps=20)
    assert [t for t in range(31) if cfg.wants_cse(t)] == [0, 1, 2, 3, 5, 10, 15, 20]
    assert not small(classical_steps=0).wants_cse(0)


def test_series_starts_unentangled():
    for case in ("hh", "ee", "he", "eh"):
        s = run_scenario(small(case=case, dim=16, steps=3)).series
        assert s.wse_half[0] < 1e-8 and s.cse_half[0] < 1e-8
        assert list(s.t) == [0, 1, 2, 3]


def test_steps_zero_single_row(tmp_path):
    run_scenario(small(steps=0, out_dir=str(tmp_path)))
    lines = (tmp_path / "entropy.csv").read_text().splitlines()
    assert lines[0] == "t,wse_half,cse_half"
    assert len(lines) == 2 and lines[1].startswith("0,")


def test_csv_format_and_roundtrip(tmp_path):
    run_scenario(small(steps=5, cse_stride=2, out_dir=str(tmp_path)))
    text = (tmp_path / "entropy.csv").read_bytes()
    assert b"\r" not in text
    rows = text.decode().splitlines()[1:]
    assert rows[1].endswith(",")  # t = 1 strided out
    t, w, c = rows[2].split(",")
    assert t == "2" and "e" in w and "e" in c and len(w.split("e")[0]) == 14
    s = EntropySeries.from_csv(tmp_path / "entropy.csv")
    assert np.isnan(s.cse_half[1]) and not np.isnan(s.cse_half[2])


def test_snapshots_written(tmp_path):
    res = run_scenario(small(dim=8, steps=3, snapshot_times=(0, 3), out_dir=str(tmp_path), png=True))
    for t in (0, 3):
        w = np.loadtxt(tmp_path / f"wigner_dof1_t{t}.csv", delimiter=",")
        g = np.loadtxt(tmp_path / f"liouville_q1p1_t{t}.csv", delimiter=",")
        assert w.shape == (16, 16) and g.shape == (8, 8)
        assert abs(w.sum() - 1) < 1e-10 and abs(g.sum() - 1) < 1e-10
        assert (tmp_path / f"wigner_dof1_t{t}.png").exists()
        assert (tmp_path / f"liouville_q1p1_t{t}.png").exists()
    np.testing.assert_allclose(res.liouville[3].sum(), 1)


def test_wigner_snapshot_peak_at_default_centre(tmp_path):
    cfg = ScenarioConfig(steps=0, snapshot_times=(0,), classical_steps=0, out_dir=str(tmp_path))
    run_scenario(cfg)
    w = np.loadtxt(tmp_path / "wigner_dof1_t0.csv", delimiter=",")
    assert w.shape == (128, 128)
    assert w[62:67, 62:67].max() == w.max()


def test_config_echo(tmp_path):
    cfg = small(snapshot_times=(1, 2), out_dir=str(tmp_path))
    run_scenario(cfg)
    echo = dict(line.split("=", 1) for line in (tmp_path / "config_echo").read_text().splitlines())
    for key in ("case", "dim", "k", "kc", "center1", "center2", "steps", "cse_stride", "subsample",
                "snapshot_times", "order", "hbar", "cells_per_axis", "map1", "map2", "snapshots"):
        assert key in echo
    assert echo["map1"] == "2,1,3,2" and echo["snapshot_times"] == "1,2"
    assert float(echo["hbar"]) == pytest.approx(1 / (16 * math.pi))
    assert config_echo(cfg) == (tmp_path / "config_echo").read_text()


def test_deterministic_serial(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        run_scenario(small(case="he", dim=16, steps=6, out_dir=str(out), serial=True))
    assert (a / "entropy.csv").read_bytes() == (b / "entropy.csv").read_bytes()


def test_unwritable_out_dir(tmp_path):
    res = run_scenario(small(steps=1))
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        emit_outputs(res, blocker / "sub")


def test_series_helpers():
    s = EntropySeries(np.arange(5), np.array([0.0, 1.0, 2.0, 3.0, 3.0]), np.full(5, np.nan))
    assert growth_rate(s) == pytest.approx(1.0)
    assert time_to_reach(s, 2.5) == 3 and time_to_reach(s, 9) == -1
    assert plateau(s, 0.4) == pytest.approx(3.0)


def test_cli_run(tmp_path):
    out = tmp_path / "cli"
    code = main(["run", "--case", "eh", "--dim", "8", "--steps", "3", "--cse-stride", "2",
                 "--snapshots", "0,2", "--out", str(out), "--serial"])
    assert code == 0
    assert (out / "entropy.csv").exists() and (out / "wigner_dof1_t2.csv").exists()
    echo = (out / "config_echo").read_text()
    assert "case=eh" in echo and "serial=True" in echo


def test_cli_rejects_bad_config(tmp_path, capsys):
    assert main(["run", "--dim", "200", "--out", str(tmp_path)]) == 2
    assert "memory guard" in capsys.readouterr().err


def test_cli_check_fast(capsys):
    assert main(["check", "--level", "fast"]) == 0
    out = capsys.readouterr().out
    assert "ALL PASS" in out and "FAIL" not in out
    assert "entropy_identity" in out and "forward_inverse" in out
