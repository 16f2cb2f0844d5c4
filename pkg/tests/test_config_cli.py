"""Config parsing, layering, builders, and end-to-end CLI runs."""

import csv
import textwrap

import numpy as np
import pytest
from numpy.testing import assert_allclose

from rotospin import OscillatorModel, cli, extinction_cross_section
from rotospin.config import (
    PRESETS,
    ConfigError,
    build_medium,
    build_model,
    build_scan_request,
    drive_amplitudes,
    layer_configs,
    load_config,
)
from rotospin.scan import reparse_balance_check


def _write(tmp_path, text, name="conf.ini"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return str(path)


def _kv(captured: str) -> dict:
    out = {}
    for line in captured.splitlines():
        key, sep, value = line.partition(" = ")
        if sep:
            out[key.strip()] = value.strip()
    return out


# ---------------------------------------------------------------------------
# file parsing


def test_keys_are_case_sensitive(tmp_path):
    path = _write(tmp_path, """\
        [scan]
        omega_min = 0.1
        Omega_min = -2.0
        """)
    cfg = load_config(path)
    assert cfg["scan"]["omega_min"] == "0.1"
    assert cfg["scan"]["Omega_min"] == "-2.0"


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "nope.ini")


def test_parse_error_carries_line_info(tmp_path):
    path = _write(tmp_path, """\
        [model]
        gamma 0.1
        """)
    with pytest.raises(ConfigError, match="line"):
        load_config(path)


def test_layering_later_wins():
    merged = layer_configs(PRESETS["fig2"],
                           {"scan": {"omega_count": "16"}},
                           {"drive": {"omega": None}})
    assert merged["scan"]["omega_count"] == "16"
    assert merged["scan"]["Omega_count"] == "256"
    assert merged["drive"]["omega"] == "1.0"   # None never overrides


# ---------------------------------------------------------------------------
# builders


def test_build_model_normalized():
    m = build_model({"model": {"gamma": "0.1", "tau": "1e-4"}})
    assert m.damping_rate == 0.1
    assert m.radiative_time == 1e-4
    assert m.natural_frequency == 1.0
    assert m.light_speed == 1.0


def test_build_model_physical_links_tau_when_absent():
    cfg = {"model": {"mode": "physical", "coupling": "2.5e24",
                     "omega0": "1e15", "gamma": "1e13"}}
    m = build_model(cfg)
    assert m.is_physically_linked
    assert_allclose(m.radiative_time,
                    2.0 * 2.5e24 / (3.0 * m.light_speed**3), rtol=1e-15)


def test_build_model_drude_sphere():
    cfg = {"model": {"source": "drude-sphere", "plasma_frequency": "1.37e16",
                     "damping": "4.05e13", "radius": "5e-6"}}
    m = build_model(cfg)
    assert_allclose(m.natural_frequency, 1.37e16 / np.sqrt(3.0), rtol=1e-12)
    assert m.is_physically_linked


def test_build_model_bad_number():
    with pytest.raises(ConfigError, match="not a number"):
        build_model({"model": {"gamma": "brisk"}})


def test_build_model_unknown_source():
    with pytest.raises(ConfigError, match="source"):
        build_model({"model": {"source": "lorentz", "gamma": "0.1"}})


def test_intensity_overrides_amplitude():
    m = OscillatorModel.normalized(0.1)
    cfg = {"drive": {"polarization": "linear", "amplitude": "5.0",
                     "intensity": "2.0"}}
    ex, ey, label = drive_amplitudes(cfg, m)
    assert label == "linear"
    assert_allclose(abs(ex), np.sqrt(2.0 * np.pi * 2.0 / m.light_speed),
                    rtol=1e-15)
    assert ey == 0.0


def test_build_scan_request_reports_section():
    m = OscillatorModel.normalized(0.1)
    cfg = {"drive": {},
           "scan": {"omega_min": "2", "omega_max": "1", "omega_count": "4",
                    "Omega_min": "0", "Omega_max": "1", "Omega_count": "4"}}
    with pytest.raises(ConfigError, match=r"\[scan\]"):
        build_scan_request(cfg, m)


def test_build_medium_normalizes_weights():
    m = OscillatorModel.normalized(0.1)
    cfg = {"medium": {"number_density": "3.0", "path_length": "1.0",
                      "members": "2.0:2, 2.5:2"}}
    spec = build_medium(cfg, m)
    assert [mem.weight for mem in spec.members] == [0.5, 0.5]
    assert [mem.rotation for mem in spec.members] == [2.0, 2.5]


def test_build_medium_bare_rotation_gets_unit_weight():
    m = OscillatorModel.normalized(0.1)
    cfg = {"medium": {"number_density": "1.0", "path_length": "1.0",
                      "members": "2.0"}}
    spec = build_medium(cfg, m)
    assert spec.members[0].weight == 1.0


def test_build_medium_bad_entry():
    m = OscillatorModel.normalized(0.1)
    cfg = {"medium": {"number_density": "1.0", "path_length": "1.0",
                      "members": "2.0:heavy"}}
    with pytest.raises(ConfigError, match="bad entry"):
        build_medium(cfg, m)


# ---------------------------------------------------------------------------
# CLI: point


def test_point_reports_balance(capsys):
    rc = cli.main(["point", "--gamma", "0.1", "--omega", "0.5",
                   "--Omega", "0.2"])
    assert rc == 0
    kv = _kv(capsys.readouterr().out)
    assert_allclose(float(kv["torque"]), 0.039588281868566895, rtol=1e-12)
    assert_allclose(float(kv["sigma_mech"]), 0.04974810219461272, rtol=1e-12)
    assert abs(float(kv["balance_residual"])) <= 1e-12


def test_point_singular_resonance_exits_3(capsys):
    rc = cli.main(["point", "--gamma", "0.1", "--omega", "1.0",
                   "--Omega", "1.0"])
    assert rc == 3
    assert "singular" in capsys.readouterr().err


def test_point_corotating_zero_torque(capsys):
    # omega = Omega away from omega0: regular, and the torque vanishes
    # exactly when radiation damping is off
    rc = cli.main(["point", "--gamma", "0.1", "--tau", "0.0",
                   "--omega", "0.7", "--Omega", "0.7"])
    assert rc == 0
    kv = _kv(capsys.readouterr().out)
    assert float(kv["torque"]) == 0.0


def test_point_missing_gamma_exits_2(capsys):
    rc = cli.main(["point", "--omega", "0.5", "--Omega", "0.2"])
    assert rc == 2
    assert "gamma" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# CLI: scan and spectrum


def test_scan_preset_with_overrides(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("ROTOSPIN_THREADS", raising=False)
    out = tmp_path / "grid.csv"
    rc = cli.main(["scan", "--preset", "fig2", "--omega-count", "12",
                   "--Omega-count", "8", "--out", str(out)])
    assert rc == 0
    assert f"wrote {out} (96 cells, 0 singular)" in capsys.readouterr().out
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 96 + 1
    # the omega = Omega = 0 cell is all zeros (static field, no motion)
    # and is skipped by the scale guard
    worst, checked = reparse_balance_check(out)
    assert checked == 95
    assert worst <= 1e-10


def test_spectrum_preset(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    rc = cli.main(["spectrum", "--preset", "fig3a", "--omega-count", "21",
                   "--out", str(out)])
    assert rc == 0
    assert "21 frequencies at Omega = 2" in capsys.readouterr().out
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 22
    assert all(row[1] == "2" for row in rows[1:])


def test_unknown_preset_exits_2(capsys):
    # argparse rejects the choice itself, also with status 2
    with pytest.raises(SystemExit) as info:
        cli.main(["scan", "--preset", "fig9"])
    assert info.value.code == 2
    assert "--preset" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# CLI: spinup


def test_spinup_from_config(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    conf = _write(tmp_path, f"""\
        [model]
        gamma = 0.1

        [drive]
        omega = 0.5

        [spinup]
        Omega_target = 1e-3
        samples = 40

        [body]
        moment_of_inertia = 2.0

        [output]
        path = {out}
        """)
    rc = cli.main(["spinup", "--config", conf])
    assert rc == 0
    kv = _kv(capsys.readouterr().out)
    assert kv["outcome"] == "target"
    assert_allclose(float(kv["terminal_Omega"]), 1e-3, rtol=1e-6)
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "Omega"]
    assert len(rows) == int(kv["samples"]) + 1


def test_spinup_unreachable_exits_2(tmp_path, capsys):
    conf = _write(tmp_path, """\
        [model]
        gamma = 0.1

        [drive]
        omega = 0.5

        [spinup]
        Omega_init = 0.8
        Omega_target = 0.9

        [body]
        moment_of_inertia = 1.0
        """)
    rc = cli.main(["spinup", "--config", conf,
                   "--out", str(tmp_path / "t.csv")])
    assert rc == 2
    assert "error" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# CLI: thermal and amplify


def test_thermal_from_config(tmp_path, capsys):
    conf = _write(tmp_path, """\
        [model]
        gamma = 0.1

        [drive]
        omega = 1.05

        [thermal]
        ambient_temperature = 1.0
        radiative_coefficient = 1.0
        """)
    rc = cli.main(["thermal", "--config", conf, "--Omega", "0.0"])
    assert rc == 0
    kv = _kv(capsys.readouterr().out)
    assert float(kv["sigma_abs"]) > 0.0
    assert float(kv["T_eq"]) > 1.0


def test_amplify_from_config(tmp_path, capsys):
    out = tmp_path / "gain.csv"
    conf = _write(tmp_path, f"""\
        [model]
        gamma = 0.1
        tau = 1e-4

        [drive]
        omega = 1.0

        [medium]
        number_density = 3.0
        path_length = 1.0
        members = 2.0:0.5, 2.5:0.5

        [output]
        path = {out}
        """)
    rc = cli.main(["amplify", "--config", conf])
    assert rc == 0
    kv = _kv(capsys.readouterr().out)
    m = OscillatorModel.normalized(0.1, 1e-4)
    from rotospin import DriveField
    drive = DriveField.lcp(1.0)
    expect = 0.5 * (extinction_cross_section(m, drive, 2.0)
                    + extinction_cross_section(m, drive, 2.5))
    assert_allclose(float(kv["mean_sigma_ext"]), expect, rtol=1e-12)
    g = float(kv["gain_coefficient"])
    assert g > 0.0
    assert_allclose(float(kv["doubling_length"]), np.log(2.0) / g, rtol=1e-12)
    assert float(kv["I_out"]) > float(kv["I_in"])
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["z", "I"]
    assert len(rows) == 102


# ---------------------------------------------------------------------------
# CLI: validate


def test_validate_passes(capsys):
    rc = cli.main(["validate"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "[FAIL]" not in out
    assert "16/16 checks passed" in out
