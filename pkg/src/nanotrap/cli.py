"""Command-line driver: ``nanotrap {mode,polarizability,magic,scan,characterize}``.

Exit status: 0 on success, 1 when the physics has no answer (no guided
root, no sign change, no minimum, ...), 2 for usage or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from . import constants as C
from .atomic import load_atom_data
from .config import PRESETS, load_config, load_preset
from .errors import ConfigError, DimensionMismatch, NanotrapError, PhysicsError
from .polarizability import MAGIC_INTENSITY, find_magic_wavelength, polarizabilities
from .trap import characterize, scan_potential
from .waveguide import FiberSpec, mode_field_array, normalize_amplitude, solve_he11

log = logging.getLogger("nanotrap")


def _emit(text: str, output: Optional[str]):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=float) + "\n"


def longitudinal_fraction(sol, direction="forward") -> float:
    """|E_z|^2 / |E|^2 just outside the surface at phi = 0 for x-polarized input."""
    E = mode_field_array(sol, 1.0, direction, 0.0, sol.a, 0.0, 0.0)
    return float(abs(E[2]) ** 2 / np.sum(np.abs(E) ** 2))


def cmd_mode(args) -> int:
    fiber = FiberSpec(args.radius, args.n1, args.n2)
    sol = solve_he11(args.wavelength, fiber)
    report = {
        "wavelength_m": sol.wavelength,
        "radius_m": sol.a,
        "n1": sol.n1,
        "n2": sol.n2,
        "beta_per_m": sol.beta,
        "h_per_m": sol.h,
        "q_per_m": sol.q,
        "s": sol.s,
        "effective_index": sol.effective_index,
        "v_number": sol.v_number,
        "longitudinal_fraction": longitudinal_fraction(sol),
    }
    if args.power is not None:
        report["power_w"] = args.power
        report["amplitude_v_per_m"] = normalize_amplitude(sol, args.power)
    _emit(_json(report), args.output)
    return 0


def cmd_polarizability(args) -> int:
    db = load_atom_data(args.atom_data)
    omega = 2 * np.pi * C.c / args.wavelength
    p = polarizabilities(args.level, args.F, omega, db, exact_tensor=args.exact_tensor)
    si = p.si()
    report = {
        "level": p.level, "F": p.F, "wavelength_m": args.wavelength,
        "alpha0_au": p.alpha0, "alpha1_au": p.alpha1, "alpha2_au": p.alpha2,
        "alpha0_si": si.alpha0, "alpha1_si": si.alpha1, "alpha2_si": si.alpha2,
    }
    _emit(_json(report), args.output)
    return 0


def cmd_magic(args) -> int:
    db = load_atom_data(args.atom_data)
    lo, hi = args.bracket
    res = find_magic_wavelength((lo, hi), ground=("6S1/2", args.ground_F),
                                excited=("6P3/2", args.excited_F, args.excited_m), db=db)
    report = {"wavelength_m": res.wavelength, "wavelength_nm": res.wavelength * 1e9,
              "slope_hz_per_nm": res.slope * 1e-9, "common_shift_hz": res.shift,
              "intensity_w_per_m2": MAGIC_INTENSITY}
    _emit(_json(report), args.output)
    return 0


def _run_config(args):
    db = load_atom_data(args.atom_data) if args.atom_data else None
    if args.preset:
        if args.config:
            raise ConfigError("give either a config file or --preset, not both")
        return load_preset(args.preset, db)
    if not args.config:
        raise ConfigError("a config file or --preset is required")
    return load_config(args.config, db)


def scan_csv(result_list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["coord", "eigenvalue_index", "manifold", "energy_hz", "energy_mk"])
    for res in result_list:
        for coord, k, man, hz, mk in res.rows():
            w.writerow([repr(coord), k, man, repr(hz), repr(mk)])
    return buf.getvalue()


def cmd_scan(args) -> int:
    run = _run_config(args)
    if run.scan is None:
        raise ConfigError("config has no 'scan' section")
    results = [scan_potential(run.trap, m, run.scan, threads=args.threads)
               for m in run.trap.manifolds]
    _emit(scan_csv(results), args.output)
    return 0


def _summary(ch) -> str:
    d = ch.as_dict()
    m = ch.minimum
    lines = [
        f"minimum: r-a = {m.distance * 1e9:.1f} nm, phi = {np.degrees(m.phi):.2f} deg, "
        f"z = {m.z * 1e9:.1f} nm",
        f"depth: {m.depth_mk:.4f} mK ({m.depth_hz / 1e6:.3f} MHz); "
        f"below surface barrier: {m.saddle_depth_mk:.4f} mK",
        "trap frequencies: " + ", ".join(f"nu_{k} = {v / 1e3:.2f} kHz"
                                         for k, v in d["frequencies_hz"].items()),
        f"motional width: {ch.coherence.sigma * 1e9:.1f} nm",
        f"F=4 splitting: {ch.coherence.splitting_min:.1f} Hz at minimum, "
        f"{ch.coherence.splitting_sigma:.1f} Hz one width away",
        f"clock spread over one width: {ch.coherence.clock_spread:.2f} Hz",
    ]
    if ch.excited is not None:
        e = ch.excited
        lines.append(f"excited F'=4 m'=0: trapped {e.trapped}, offset {e.offset * 1e9:.1f} nm, "
                     f"depth {C.hz_to_mk(e.depth_hz):.4f} mK")
    return "\n".join(lines) + "\n"


def cmd_characterize(args) -> int:
    run = _run_config(args)
    ch = characterize(run.trap, reduce=run.potential, threads=args.threads,
                      excited=run.excited)
    report = ch.as_dict()
    report["config"] = run.trap.name
    if args.output:
        _emit(_json(report), args.output)
        sys.stdout.write(_summary(ch))
    else:
        sys.stdout.write(_summary(ch))
        sys.stdout.write(_json(report))
    return 0


def _common(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--atom-data", default=d(None), metavar="PATH",
                   help="atom data JSON file (default: bundled Cs data)")
    p.add_argument("--output", "-o", default=d(None), metavar="PATH",
                   help="write results here instead of stdout")
    p.add_argument("--threads", type=int, default=d(1), metavar="N",
                   help="worker threads for grid evaluation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nanotrap",
                                     description="State-resolved nanofiber trap potentials for Cs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mode", help="solve the HE11 mode")
    _common(p, suppress=True)
    p.add_argument("--wavelength", type=float, required=True, help="vacuum wavelength (m)")
    p.add_argument("--radius", type=float, required=True, help="fiber radius (m)")
    p.add_argument("--n1", type=float, default=None, help="core index (default: silica Sellmeier)")
    p.add_argument("--n2", type=float, default=1.0, help="cladding index")
    p.add_argument("--power", type=float, default=None, help="beam power (W) for the amplitude")
    p.set_defaults(func=cmd_mode)

    p = sub.add_parser("polarizability", help="scalar, vector and tensor polarizabilities")
    _common(p, suppress=True)
    p.add_argument("--level", required=True, help="fine-structure level, e.g. 6S1/2")
    p.add_argument("--F", type=float, required=True)
    p.add_argument("--wavelength", type=float, required=True, help="wavelength (m)")
    p.add_argument("--exact-tensor", action="store_true",
                   help="keep the hyperfine-induced tensor part of J=1/2 levels")
    p.set_defaults(func=cmd_polarizability)

    p = sub.add_parser("magic", help="magic wavelength inside a bracket")
    _common(p, suppress=True)
    p.add_argument("--bracket", type=float, nargs=2, required=True, metavar=("LO", "HI"),
                   help="wavelength bracket (m)")
    p.add_argument("--ground-F", type=float, default=4.0)
    p.add_argument("--excited-F", type=float, default=4.0)
    p.add_argument("--excited-m", type=float, default=0.0)
    p.set_defaults(func=cmd_magic)

    for name, func, text in (("scan", cmd_scan, "1D potential scan to CSV"),
                             ("characterize", cmd_characterize, "trap minimum and figures of merit")):
        p = sub.add_parser(name, help=text)
        _common(p, suppress=True)
        p.add_argument("config", nargs="?", help="run configuration file")
        p.add_argument("--preset", choices=PRESETS, help="use a bundled configuration")
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except PhysicsError as exc:
        print(f"nanotrap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, DimensionMismatch, KeyError) as exc:
        print(f"nanotrap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NanotrapError as exc:
        print(f"nanotrap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
