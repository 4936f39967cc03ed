"""Run configuration files: JSON with unit-suffixed keys, schema-validated."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from .atomic import AtomDatabase, default_database, load_atom_data
from .errors import ConfigError, ParseError, SchemaError
from .lightshift import Manifold
from .surface import SurfaceModel
from .trap import DEFAULT_MANIFOLDS, ScanGrid, TrapConfiguration, compensated_pair
from .waveguide import BeamSpec, FiberSpec

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "type": "object",
    "required": ["format", "version", "fiber", "beams"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": "nanotrap-config"},
        "version": {"const": 1},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "atom_data": {"type": ["string", "null"]},
        "fiber": {
            "type": "object", "required": ["radius_m"], "additionalProperties": False,
            "properties": {"radius_m": _NUM, "n1": {"type": ["number", "null"]}, "n2": _NUM},
        },
        "beams": {
            "type": "array",
            "items": {
                "type": "object", "additionalProperties": False,
                "required": ["wavelength_m", "power_w"],
                "properties": {
                    "name": {"type": "string"},
                    "wavelength_m": _NUM,
                    "power_w": _NUM,
                    "direction": {"enum": ["forward", "backward"]},
                    "polarization_angle_rad": _NUM,
                    "coherence_group": {"type": "integer"},
                    "detuning_offset_hz": _NUM,
                },
            },
        },
        "compensated_pairs": {
            "type": "array",
            "items": {
                "type": "object", "additionalProperties": False,
                "required": ["wavelength_m", "power_w", "groups"],
                "properties": {
                    "name": {"type": "string"},
                    "wavelength_m": _NUM,
                    "power_w": _NUM,
                    "polarization_angle_rad": _NUM,
                    "groups": {"type": "array", "items": {"type": "integer"},
                               "minItems": 2, "maxItems": 2},
                },
            },
        },
        "delta_fb_hz": _NUM,
        "surface": {
            "type": "object", "additionalProperties": False,
            "properties": {"c3_over_h_khz_um3": _POS, "excited_scale": _POS},
        },
        "manifolds": {
            "type": "array", "minItems": 1,
            "items": {
                "type": "object", "additionalProperties": False, "required": ["level", "F"],
                "properties": {"level": {"type": "string"}, "F": _NUM},
            },
        },
        "scan": {
            "type": "object", "additionalProperties": False, "required": ["axis", "n"],
            "properties": {
                "axis": {"enum": ["radial", "azimuthal", "axial"]},
                "start_m": _NUM, "stop_m": _NUM,
                "start_rad": _NUM, "stop_rad": _NUM,
                "n": {"type": "integer", "minimum": 1},
                "d_m": _NUM, "phi_rad": _NUM, "z_m": _NUM,
            },
        },
        "characterize": {
            "type": "object", "additionalProperties": False,
            "properties": {"potential": {"enum": ["mean", "lowest"]},
                           "excited": {"type": "boolean"}},
        },
    },
}


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    trap: TrapConfiguration
    scan: Optional[ScanGrid]
    potential: str
    excited: bool
    source: str = ""

    def to_dict(self) -> dict:
        return copy.deepcopy(self.raw)

    def dumps(self) -> str:
        return json.dumps(self.raw, indent=2) + "\n"


def _scan_grid(s: dict) -> ScanGrid:
    ang = s["axis"] == "azimuthal"
    keys = ("start_rad", "stop_rad") if ang else ("start_m", "stop_m")
    wrong = ("start_m", "stop_m") if ang else ("start_rad", "stop_rad")
    if any(k in s for k in wrong):
        raise SchemaError(f"{s['axis']} scan range must use {keys[0]}/{keys[1]}")
    if not all(k in s for k in keys):
        raise SchemaError(f"{s['axis']} scan needs {keys[0]} and {keys[1]}")
    return ScanGrid(s["axis"], s[keys[0]], s[keys[1]], s["n"],
                    d=s.get("d_m", 200e-9), phi=s.get("phi_rad", 0.0), z=s.get("z_m", 0.0))


def parse_config(raw: dict, source: str = "", db: Optional[AtomDatabase] = None,
                 base_dir: Optional[Path] = None) -> RunConfig:
    """Validate and build a RunConfig; ``db`` overrides the file's atom_data."""
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{source}: {exc.message} at {list(exc.absolute_path)}") from None
    if db is None:
        path = raw.get("atom_data")
        if path:
            p = Path(path)
            if not p.is_absolute() and base_dir is not None:
                p = base_dir / p
            db = load_atom_data(p)
        else:
            db = default_database()
    f = raw["fiber"]
    fiber = FiberSpec(f["radius_m"], f.get("n1"), f.get("n2", 1.0))
    beams = [BeamSpec(b["wavelength_m"], b["power_w"], b.get("direction", "forward"),
                      b.get("polarization_angle_rad", 0.0), b.get("coherence_group", 0),
                      b.get("detuning_offset_hz", 0.0), b.get("name", ""))
             for b in raw["beams"]]
    dfb = raw.get("delta_fb_hz", 0.0)
    for p in raw.get("compensated_pairs", []):
        beams += compensated_pair(p["wavelength_m"], p["power_w"], dfb,
                                  p.get("polarization_angle_rad", 0.0), tuple(p["groups"]),
                                  p.get("name", "pair"))
    s = raw.get("surface", {})
    surface = SurfaceModel.from_khz_um3(s.get("c3_over_h_khz_um3", 1.2),
                                        s.get("excited_scale", 2.0))
    if "manifolds" in raw:
        manifolds = tuple(Manifold(m["level"], float(m["F"])) for m in raw["manifolds"])
        for m in manifolds:
            if m.F not in db.level(m.level).F_values:
                raise ConfigError(f"F={m.F:g} not allowed for {m.level}")
    else:
        manifolds = DEFAULT_MANIFOLDS
    trap = TrapConfiguration(fiber, tuple(beams), surface, manifolds, dfb, db,
                             raw.get("name", ""))
    scan = _scan_grid(raw["scan"]) if "scan" in raw else None
    ch = raw.get("characterize", {})
    return RunConfig(copy.deepcopy(raw), trap, scan, ch.get("potential", "mean"),
                     ch.get("excited", True), source)


def load_config(path, db: Optional[AtomDatabase] = None) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return loads_config(text, str(path), db, path.parent)


def loads_config(text: str, source: str = "<string>", db=None, base_dir=None) -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: {exc}") from None
    return parse_config(raw, source, db, base_dir)


PRESETS = ("vetsch", "magic")


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return (resources.files("nanotrap") / "presets" / f"{name}.config").read_text()


def load_preset(name: str, db: Optional[AtomDatabase] = None) -> RunConfig:
    return loads_config(preset_text(name), f"preset:{name}", db)
