import json
import subprocess
import sys

import pytest

from nanotrap.cli import main
from nanotrap.config import PRESETS, load_config, load_preset, loads_config, preset_text
from nanotrap.errors import ConfigError, ParseError, SchemaError


@pytest.mark.parametrize("name", PRESETS)
def test_preset_round_trip(name):
    run = load_preset(name)
    assert run.to_dict() == json.loads(preset_text(name))
    again = loads_config(run.dumps())
    assert again.trap == run.trap and again.scan == run.scan


def test_presets_match_configurations():
    v = load_preset("vetsch").trap
    assert sorted(b.power for b in v.beams) == [0.0022, 0.0022, 0.025]
    m = load_preset("magic").trap
    assert m.delta_fb == 30e9
    assert sorted(round(b.wavelength * 1e9) for b in m.beams) == [687, 687, 937, 937]


def test_schema_errors(tmp_path):
    raw = json.loads(preset_text("vetsch"))
    raw["beams"][0]["power_mw"] = 1
    with pytest.raises(SchemaError):
        loads_config(json.dumps(raw))
    raw = json.loads(preset_text("vetsch"))
    raw["scan"] = {"axis": "azimuthal", "start_m": 0, "stop_m": 1, "n": 3}
    with pytest.raises(SchemaError):
        loads_config(json.dumps(raw))
    with pytest.raises(ParseError):
        loads_config("{")
    with pytest.raises(ParseError):
        load_config(tmp_path / "missing.config")
    with pytest.raises(ConfigError):
        preset_text("nope")


def test_relative_atom_data_path(tmp_path):
    raw = json.loads(preset_text("vetsch"))
    raw["atom_data"] = "atoms.json"
    (tmp_path / "atoms.json").write_text("{}")
    (tmp_path / "t.config").write_text(json.dumps(raw))
    with pytest.raises(SchemaError):
        load_config(tmp_path / "t.config")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "nanotrap.cli", *args],
                          capture_output=True, text=True)


def test_cli_mode_ok(capsys):
    assert main(["mode", "--wavelength", "937e-9", "--radius", "250e-9", "--power", "1e-3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert 0.18 <= out["longitudinal_fraction"] <= 0.22
    assert out["amplitude_v_per_m"] > 0


def test_cli_polarizability_and_magic(capsys):
    assert main(["polarizability", "--level", "6S1/2", "--F", "4", "--wavelength", "937e-9"]) == 0
    assert json.loads(capsys.readouterr().out)["alpha0_au"] > 0
    assert main(["magic", "--bracket", "934e-9", "940e-9"]) == 0
    assert 934 < json.loads(capsys.readouterr().out)["wavelength_nm"] < 940


def test_cli_exit_codes(tmp_path):
    assert _cli("mode", "--wavelength", "937e-9", "--radius", "250e-9", "--n1", "1.0").returncode == 1
    assert _cli("magic", "--bracket", "1000e-9", "1010e-9").returncode == 1
    assert _cli("scan").returncode == 2
    bad = tmp_path / "bad.config"
    bad.write_text('{"format": "nanotrap-config"}')
    r = _cli("scan", str(bad))
    assert r.returncode == 2 and "SchemaError" in r.stderr
    assert _cli("polarizability", "--level", "9Z1/2", "--F", "4",
                "--wavelength", "937e-9").returncode == 2
    assert _cli("frobnicate").returncode == 2


def test_scan_output_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _cli("--threads", "2", "scan", "--preset", "vetsch", "-o", str(a)).returncode == 0
    assert _cli("scan", "--preset", "vetsch", "--output", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "coord,eigenvalue_index,manifold,energy_hz,energy_mk"
    assert len(lines) == 1 + 117 * (7 + 9 + 9)
