"""Cs level structure and E1 line data loaded from a bundled JSON file."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, List, Tuple

import jsonschema

from .errors import ParseError, SchemaError, SelectionRuleError

log = logging.getLogger(__name__)

L_LETTERS = "SPDFG"

#: manifolds that must be present in any database (n ranges inclusive)
REQUIRED_SERIES = {
    (0, 0.5): range(6, 16),
    (1, 0.5): range(6, 12),
    (1, 1.5): range(6, 12),
    (2, 1.5): range(6, 12),
    (2, 2.5): range(6, 12),
}

_TAGGED = {
    "type": "object",
    "required": ["value", "source"],
    "properties": {
        "value": {"type": "number"},
        "source": {"type": "string", "minLength": 1},
        "unit": {"type": "string"},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "required": ["format", "version", "species", "nuclear_spin", "mass",
                 "ground_hyperfine_splitting", "levels", "lines"],
    "properties": {
        "format": {"const": "nanotrap-atom-data"},
        "version": {"const": 1},
        "species": {"type": "string"},
        "provenance": {"type": "string"},
        "nuclear_spin": _TAGGED,
        "mass": _TAGGED,
        "ground_hyperfine_splitting": _TAGGED,
        "levels": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["label", "n", "L", "J", "energy"],
                "properties": {
                    "label": {"type": "string"},
                    "n": {"type": "integer", "minimum": 1},
                    "L": {"type": "integer", "minimum": 0},
                    "J": {"type": "number", "minimum": 0.5},
                    "energy": _TAGGED,
                    "A": _TAGGED,
                    "B": _TAGGED,
                    "gamma": _TAGGED,
                },
                "additionalProperties": False,
            },
        },
        "lines": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lower", "upper", "d"],
                "properties": {
                    "lower": {"type": "string"},
                    "upper": {"type": "string"},
                    "d": _TAGGED,
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def level_label(n: int, L: int, J: float) -> str:
    return f"{n}{L_LETTERS[L]}{int(2 * J)}/2"


@dataclass(frozen=True)
class FineLevel:
    label: str
    n: int
    L: int
    J: float
    energy: float          # Hz above the 6S1/2 centroid
    A: float = 0.0         # Hz
    B: float = 0.0         # Hz
    gamma: float = 0.0     # Hz
    I: float = 3.5

    @property
    def F_values(self) -> List[float]:
        lo = abs(self.J - self.I)
        return [lo + k for k in range(int(round(self.J + self.I - lo)) + 1)]

    def hyperfine_shift(self, F: float) -> float:
        """Magnetic-dipole + electric-quadrupole hyperfine energy (Hz)."""
        I, J = self.I, self.J
        K = F * (F + 1) - I * (I + 1) - J * (J + 1)
        shift = 0.5 * self.A * K
        if self.B and J > 0.5 and I > 0.5:
            shift += self.B * (1.5 * K * (K + 1) - 2 * I * (I + 1) * J * (J + 1)) \
                / (4 * I * (2 * I - 1) * J * (2 * J - 1))
        return shift

    def hyperfine_energy(self, F: float) -> float:
        return self.energy + self.hyperfine_shift(F)


@dataclass(frozen=True)
class DipoleLine:
    lower: FineLevel
    upper: FineLevel
    d: float               # |<J||d||J'>| in e a0


@dataclass(frozen=True)
class AtomConstants:
    mass: float                     # kg
    ground_hyperfine_splitting: float  # Hz
    nuclear_spin: float


class AtomDatabase:
    """Read-only container of levels and E1 lines."""

    def __init__(self, levels: Dict[str, FineLevel], lines: List[DipoleLine],
                 constants: AtomConstants, source: str = ""):
        self._levels = dict(levels)
        self._lines = tuple(lines)
        self.constants = constants
        self.source = source
        self._partners: Dict[str, Tuple[Tuple[FineLevel, float], ...]] = {}
        tmp: Dict[str, list] = {lab: [] for lab in self._levels}
        for ln in self._lines:
            tmp[ln.lower.label].append((ln.upper, ln.d))
            tmp[ln.upper.label].append((ln.lower, ln.d))
        self._partners = {k: tuple(v) for k, v in tmp.items()}

    @property
    def levels(self) -> Dict[str, FineLevel]:
        return dict(self._levels)

    @property
    def lines(self) -> Tuple[DipoleLine, ...]:
        return self._lines

    def level(self, label: str) -> FineLevel:
        try:
            return self._levels[label]
        except KeyError:
            raise KeyError(f"level {label!r} not in database") from None

    def partners(self, label: str) -> Tuple[Tuple[FineLevel, float], ...]:
        """(coupled level, reduced dipole) pairs for one level."""
        return self._partners[self.level(label).label]

    def without_lines(self, keep) -> "AtomDatabase":
        """Copy keeping only lines for which ``keep(line)`` is true."""
        return AtomDatabase(self._levels, [ln for ln in self._lines if keep(ln)],
                            self.constants, self.source)

    @property
    def mass(self) -> float:
        return self.constants.mass


def hyperfine_levels(level: FineLevel) -> List[Tuple[float, float]]:
    """(F, energy in Hz) for every hyperfine level, F ascending."""
    return [(F, level.hyperfine_energy(F)) for F in level.F_values]


def _check_selection(lo: FineLevel, up: FineLevel):
    if abs(lo.L - up.L) != 1 or abs(lo.J - up.J) > 1:
        raise SelectionRuleError(f"E1 line {lo.label} - {up.label} violates selection rules")


def parse_atom_data(raw: dict, source: str = "") -> AtomDatabase:
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{source}: {exc.message} at {list(exc.absolute_path)}") from None

    I = raw["nuclear_spin"]["value"]
    levels: Dict[str, FineLevel] = {}
    missing_hfs = []
    for item in raw["levels"]:
        lab = item["label"]
        if lab in levels:
            raise SchemaError(f"duplicate level {lab}")
        if lab != level_label(item["n"], item["L"], item["J"]):
            raise SchemaError(f"label {lab} does not match quantum numbers")
        if abs(item["J"] - item["L"]) != 0.5:
            raise SchemaError(f"{lab}: J must be L +/- 1/2")
        if "A" not in item:
            missing_hfs.append(lab)
        levels[lab] = FineLevel(
            label=lab, n=item["n"], L=item["L"], J=item["J"],
            energy=item["energy"]["value"],
            A=item.get("A", {}).get("value", 0.0),
            B=item.get("B", {}).get("value", 0.0),
            gamma=item.get("gamma", {}).get("value", 0.0),
            I=I)
    if missing_hfs:
        log.info("no hyperfine constants for %d levels (A=B=0 assumed): %s",
                    len(missing_hfs), ", ".join(missing_hfs))

    lines = []
    seen = set()
    for item in raw["lines"]:
        lo_lab, up_lab = item["lower"], item["upper"]
        if lo_lab not in levels or up_lab not in levels:
            raise SchemaError(f"line {lo_lab}-{up_lab} references an unknown level")
        lo, up = levels[lo_lab], levels[up_lab]
        _check_selection(lo, up)
        key = frozenset((lo_lab, up_lab))
        if key in seen:
            raise SchemaError(f"duplicate line {lo_lab}-{up_lab}")
        seen.add(key)
        if not item["d"]["value"] > 0:
            raise SchemaError(f"line {lo_lab}-{up_lab}: reduced matrix element must be > 0")
        lines.append(DipoleLine(lo, up, item["d"]["value"]))

    # required manifolds and their lines to 6S1/2 / 6P3/2
    linked = {lab: set() for lab in levels}
    for ln in lines:
        linked[ln.lower.label].add(ln.upper.label)
        linked[ln.upper.label].add(ln.lower.label)
    for (L, J), ns in REQUIRED_SERIES.items():
        for n in ns:
            lab = level_label(n, L, J)
            if lab not in levels:
                raise SchemaError(f"required level {lab} missing")
            anchor = "6S1/2" if L == 1 else "6P3/2"
            if lab == anchor:
                continue
            if anchor not in linked[lab]:
                raise SchemaError(f"required line {anchor}-{lab} missing")

    consts = AtomConstants(mass=raw["mass"]["value"],
                           ground_hyperfine_splitting=raw["ground_hyperfine_splitting"]["value"],
                           nuclear_spin=I)
    return AtomDatabase(levels, lines, consts, source)


def load_atom_data(path=None) -> AtomDatabase:
    """Load and validate an atom data file; ``None`` loads the bundled Cs file."""
    if path is None:
        return default_database()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return parse_atom_data(raw, str(path))


@lru_cache(maxsize=1)
def default_database() -> AtomDatabase:
    ref = resources.files("nanotrap") / "data" / "cs133.json"
    raw = json.loads(ref.read_text())
    return parse_atom_data(raw, "bundled:cs133.json")
