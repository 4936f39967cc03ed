"""Hyperfine-resolved dynamic polarizabilities and magic wavelengths.

Rank-K polarizabilities follow the irreducible-tensor sum over every
hyperfine level F' of every coupled fine-structure level,

    alpha^(K)_F = (-1)^(K+F+1) sqrt(2K+1) sum (-1)^F' {1 K 1; F F' F}
                  |<F'||d||F>|^2 [1/(w_F'F - w) + (-1)^K/(w_F'F + w)],

with |<F'||d||F>|^2 = (2F+1)(2F'+1) {J F I; F' J' 1}^2 |<J'||d||J>|^2.
They are reported in the normalization of the light-shift operator

    H = -1/4 [ a0 E*.E + i a1 (E* x E).F / F
               + a2 3/(F(2F-1)) sum_ij E*_i E_j (F_i F_j + F_j F_i)/2 - F^2 d_ij/3) ]

where E is the complex amplitude of the field.  Values are in atomic
units internally; :meth:`PolarizabilitySet.si` converts to C m^2/V.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from . import constants as C
from .atomic import AtomDatabase, FineLevel, default_database
from .errors import ConfigError, NonConvergence, NoSignChange, OnResonance
from .wigner import wigner_6j

DEFAULT_GUARD = 2 * np.pi * 1e9   # rad/s


@dataclass(frozen=True)
class PolarizabilitySet:
    level: str
    J: float
    F: float
    omega: float          # rad/s
    alpha0: float
    alpha1: float
    alpha2: float
    unit: str = "au"

    def si(self) -> "PolarizabilitySet":
        if self.unit == "SI":
            return self
        f = C.AU_POLARIZABILITY
        return PolarizabilitySet(self.level, self.J, self.F, self.omega,
                                 self.alpha0 * f, self.alpha1 * f, self.alpha2 * f, unit="SI")

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha0, self.alpha1, self.alpha2])


def _parity(x) -> int:
    return -1 if int(round(x)) % 2 else 1


def hyperfine_reduced_sq(J, F, Jp, Fp, I, d) -> float:
    """|<J' I F'||d||J I F>|^2 from the fine-structure reduced element."""
    return (2 * F + 1) * (2 * Fp + 1) * wigner_6j(J, F, I, Fp, Jp, 1) ** 2 * d * d


def rank_polarizabilities(level: FineLevel, F: float, omega: float,
                          db: AtomDatabase, guard: float = DEFAULT_GUARD,
                          lines: Optional[Sequence] = None) -> np.ndarray:
    """Irreducible alpha^(0,1,2) (atomic units) of hyperfine level F."""
    if F not in level.F_values:
        raise ConfigError(f"F={F} not allowed for {level.label}")
    w = omega * C.hbar / C.E_h
    E_F = level.hyperfine_energy(F)
    acc = np.zeros(3)
    partners = db.partners(level.label) if lines is None else lines
    for other, d in partners:
        for Fp in other.F_values:
            if abs(Fp - F) > 1:
                continue
            w_res_si = 2 * np.pi * (other.hyperfine_energy(Fp) - E_F)
            if min(abs(w_res_si - omega), abs(w_res_si + omega)) < guard:
                raise OnResonance(
                    f"{omega / 2 / np.pi:.6e} Hz within guard of {level.label} F={F} -> "
                    f"{other.label} F'={Fp}")
            w_res = w_res_si * C.hbar / C.E_h
            dsq = hyperfine_reduced_sq(level.J, F, other.J, Fp, level.I, d)
            co, counter = 1.0 / (w_res - w), 1.0 / (w_res + w)
            for K in range(3):
                six = wigner_6j(1, K, 1, F, Fp, F)
                if six == 0.0:
                    continue
                acc[K] += _parity(Fp) * six * dsq * (co + (counter if K % 2 == 0 else -counter))
    out = np.empty(3)
    for K in range(3):
        out[K] = _parity(K + F + 1) * np.sqrt(2 * K + 1) * acc[K]
    return out


def polarizabilities(level, F: float, omega: float, db: Optional[AtomDatabase] = None,
                     guard: float = DEFAULT_GUARD, exact_tensor: bool = False,
                     lines=None) -> PolarizabilitySet:
    """Scalar, vector and tensor polarizabilities of (level, F) at angular frequency omega.

    For J = 1/2 the rank-2 part is set to zero unless ``exact_tensor``; the
    residual hyperfine-induced tensor of such levels is smaller than the
    scalar by roughly (excited hyperfine splitting / detuning)^2 scale and is
    not part of the trap model.
    """
    db = db or default_database()
    if isinstance(level, str):
        level = db.level(level)
    a = rank_polarizabilities(level, F, omega, db, guard, lines)
    alpha_s = a[0] / np.sqrt(3 * (2 * F + 1))
    alpha_v = -a[1] * np.sqrt(2 * F / ((F + 1) * (2 * F + 1))) if F > 0 else 0.0
    if F >= 1 and (exact_tensor or level.J > 0.5):
        alpha_t = -a[2] * np.sqrt(2 * F * (2 * F - 1) / (3 * (F + 1) * (2 * F + 1) * (2 * F + 3)))
    else:
        alpha_t = 0.0
    return PolarizabilitySet(level.label, level.J, F, omega,
                             float(alpha_s), float(-alpha_v / 2), float(alpha_t))


def fine_structure_scalar(level, omega: float, db: Optional[AtomDatabase] = None) -> float:
    """Hyperfine-free scalar polarizability of a fine-structure level (a.u.)."""
    db = db or default_database()
    if isinstance(level, str):
        level = db.level(level)
    w = omega * C.hbar / C.E_h
    total = 0.0
    for other, d in db.partners(level.label):
        w_res = C.hz_to_au(other.energy - level.energy)
        total += 2 * w_res * d * d / (w_res ** 2 - w ** 2)
    return total / (3 * (2 * level.J + 1))


# -- light-shift spectra and magic wavelengths

def linear_sublevel_shift(pols: PolarizabilitySet, m: float, intensity: float) -> float:
    """Shift (Hz) of |F, m> in linearly polarized light along the quantization axis."""
    F = pols.F
    p = pols.si()
    tensor = 0.0
    if F >= 1:
        tensor = p.alpha2 * (3 * m * m - F * (F + 1)) / (F * (2 * F - 1))
    E2 = C.intensity_to_field2(intensity)
    return -0.25 * E2 * (p.alpha0 + tensor) / C.h


def scalar_light_shift_spectrum(states: Iterable[Tuple[str, float, float]], wavelengths,
                                intensity: float, db: Optional[AtomDatabase] = None,
                                **kw) -> Dict[Tuple[str, float, float], np.ndarray]:
    """Per-sublevel shift U(lambda) in Hz for linear polarization.

    ``states`` holds (level label, F, m_F) triples.
    """
    db = db or default_database()
    lams = np.atleast_1d(np.asarray(wavelengths, float))
    out = {}
    for lab, F, m in states:
        vals = np.empty(lams.shape)
        for i, lam in enumerate(lams):
            pols = polarizabilities(lab, F, 2 * np.pi * C.c / lam, db, **kw)
            vals[i] = linear_sublevel_shift(pols, m, intensity)
        out[(lab, F, m)] = vals
    return out


MAGIC_INTENSITY = 2.9e9   # W/m^2


@dataclass(frozen=True)
class MagicResult:
    wavelength: float   # m
    slope: float        # Hz of differential shift per m of wavelength
    shift: float        # common light shift at the crossing (Hz)


def differential_shift(lam: float, ground=("6S1/2", 4.0), excited=("6P3/2", 4.0, 0.0),
                       intensity: float = MAGIC_INTENSITY, db=None, **kw) -> float:
    """U_ground - U_excited (Hz) at one wavelength."""
    db = db or default_database()
    omega = 2 * np.pi * C.c / lam
    g = polarizabilities(ground[0], ground[1], omega, db, **kw)
    e = polarizabilities(excited[0], excited[1], omega, db, **kw)
    mg = ground[2] if len(ground) > 2 else 0.0
    return linear_sublevel_shift(g, mg, intensity) - linear_sublevel_shift(e, excited[2], intensity)


def find_magic_wavelength(bracket: Tuple[float, float], ground=("6S1/2", 4.0),
                          excited=("6P3/2", 4.0, 0.0), intensity: float = MAGIC_INTENSITY,
                          db: Optional[AtomDatabase] = None, tol: float = 1e-16,
                          n_scan: int = 200, **kw) -> MagicResult:
    """Wavelength in `bracket` (m) where ground and excited shifts cross.

    The bracket is scanned for sign changes of the differential shift;
    sign changes across a resonance pole are rejected.  The first genuine
    crossing (shortest wavelength) is refined to `tol` (m).
    """
    db = db or default_database()
    lo, hi = sorted(bracket)
    if not hi > lo:
        raise NoSignChange(f"empty bracket [{lo}, {hi}]")

    def f(lam):
        return differential_shift(lam, ground, excited, intensity, db, **kw)

    grid = np.linspace(lo, hi, n_scan + 1)
    vals = np.array([f(x) for x in grid])
    for i in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]:
        try:
            root = brentq(f, grid[i], grid[i + 1], xtol=tol, rtol=1e-15, maxiter=200)
        except RuntimeError as exc:
            raise NonConvergence(str(exc)) from exc
        # a pole flips sign with a diverging magnitude; a root does not
        if abs(f(root)) < min(abs(vals[i]), abs(vals[i + 1])):
            step = max(1e-12, 1e-4 * (hi - lo))
            slope = (f(root + step) - f(root - step)) / (2 * step)
            omega = 2 * np.pi * C.c / root
            g = polarizabilities(ground[0], ground[1], omega, db, **kw)
            common = linear_sublevel_shift(g, ground[2] if len(ground) > 2 else 0.0, intensity)
            return MagicResult(root, slope, common)
    raise NoSignChange(
        f"differential shift keeps its sign over [{lo * 1e9:.3f}, {hi * 1e9:.3f}] nm")
