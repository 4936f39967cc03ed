"""Exact HE11 mode of a step-index cylinder and its evanescent field.

Field amplitudes follow the phase convention of the fiber-trap literature:
the complex vector returned for a beam is the coefficient of exp(+i w t),
so a forward beam carries exp(-i beta z) and its longitudinal component is
+i times a real function of (r, phi).  The backward beam of the same input
polarization flips the sign of beta z and of the longitudinal component.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import integrate
from scipy.optimize import brentq
from scipy.special import jv, jvp, kv, kvp

from . import constants as C
from .errors import (ConfigError, InsideFiber, MixedWavelengthGroup,
                     NoGuidedRoot, NonConvergence)

# Malitson (1965) three-term Sellmeier coefficients for fused silica, lambda in um
_SELLMEIER_B = (0.6961663, 0.4079426, 0.8974794)
_SELLMEIER_L = (0.0684043, 0.1162414, 9.896161)


def silica_index(wavelength):
    """Refractive index of fused silica at `wavelength` (m)."""
    l2 = (np.asarray(wavelength) * 1e6) ** 2
    n2 = 1.0
    for b, l0 in zip(_SELLMEIER_B, _SELLMEIER_L):
        n2 = n2 + b * l2 / (l2 - l0 ** 2)
    return np.sqrt(n2)


@dataclass(frozen=True)
class FiberSpec:
    """Infinite step-index cylinder.

    ``n1=None`` selects the fused-silica Sellmeier index at each wavelength.
    """
    radius: float
    n1: Optional[float] = None
    n2: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigError(f"fiber radius must be positive, got {self.radius}")
        if self.n2 < 1.0:
            raise ConfigError(f"cladding index must be >= 1, got {self.n2}")
        if self.n1 is not None and self.n1 < 1.0:
            raise ConfigError(f"core index must be >= 1, got {self.n1}")

    def core_index(self, wavelength: float) -> float:
        if self.n1 is None:
            return float(silica_index(wavelength))
        return float(self.n1)


@dataclass(frozen=True)
class GuidedModeSolution:
    wavelength: float
    fiber: FiberSpec
    beta: float
    h: float
    q: float
    s: float
    n1: float

    @property
    def k0(self) -> float:
        return 2 * np.pi / self.wavelength

    @property
    def n2(self) -> float:
        return self.fiber.n2

    @property
    def a(self) -> float:
        return self.fiber.radius

    @property
    def effective_index(self) -> float:
        return self.beta / self.k0

    @property
    def v_number(self) -> float:
        return self.k0 * self.a * np.sqrt(self.n1 ** 2 - self.n2 ** 2)


@dataclass(frozen=True)
class BeamSpec:
    """One guided trapping beam.

    ``polarization_angle`` is the input linear-polarization axis measured
    from x.  Beams sharing a ``coherence_group`` add as fields; distinct
    groups add as intensities.  ``detuning_offset`` (Hz) shifts the optical
    frequency seen by the atom, not the mode.
    """
    wavelength: float
    power: float
    direction: str = "forward"
    polarization_angle: float = 0.0
    coherence_group: int = 0
    detuning_offset: float = 0.0
    name: str = ""

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ConfigError(f"wavelength must be positive, got {self.wavelength}")
        if self.power < 0:
            raise ConfigError(f"beam power must be non-negative, got {self.power}")
        if self.direction not in ("forward", "backward"):
            raise ConfigError(f"direction must be 'forward' or 'backward', got {self.direction!r}")

    @property
    def frequency(self) -> float:
        """Optical frequency seen by the atom (Hz)."""
        return C.c / self.wavelength + self.detuning_offset

    @property
    def angular_frequency(self) -> float:
        return 2 * np.pi * self.frequency


@dataclass(frozen=True)
class ComplexField:
    """Complex field amplitude at one point, Cartesian components in V/m."""
    position: tuple
    E_plus: np.ndarray = field(repr=False)

    @property
    def E_minus(self) -> np.ndarray:
        return np.conj(self.E_plus)

    @property
    def intensity_measure(self) -> float:
        """|E|^2 in V^2/m^2."""
        return float(np.vdot(self.E_plus, self.E_plus).real)


# -- dispersion relation

def _uw_terms(u, w):
    """Bessel ratios J1'(u)/(u J1(u)) and K1'(w)/(w K1(w))."""
    return jvp(1, u) / (u * jv(1, u)), kvp(1, w) / (w * kv(1, w))


def characteristic(beta, wavelength, fiber):
    """HE/EH (l=1) eigenvalue function; zero at a guided-mode beta.

    Continuity of the tangential E and H at r=a gives
    (X+Y)(n1^2 X + n2^2 Y) = (beta/k0)^2 (1/u^2 + 1/w^2)^2
    with X = J1'(u)/(u J1(u)), Y = K1'(w)/(w K1(w)), u = h a, w = q a.
    This is the literal form; the solver uses an algebraically equivalent
    one that stays well conditioned near cutoff (see ``_char_uw``).
    """
    k0 = 2 * np.pi / wavelength
    n1, n2 = fiber.core_index(wavelength), fiber.n2
    a = fiber.radius
    beta = np.asarray(beta, dtype=float)
    u = a * np.sqrt(k0 ** 2 * n1 ** 2 - beta ** 2)
    w = a * np.sqrt(beta ** 2 - k0 ** 2 * n2 ** 2)
    X, Y = _uw_terms(u, w)
    return (X + Y) * (n1 ** 2 * X + n2 ** 2 * Y) - (beta / k0) ** 2 * (1 / u ** 2 + 1 / w ** 2) ** 2


def _char_uw(u, w, n1, n2):
    # With X = Xt - 1/u^2 and Y = -Yt - 1/w^2 (Bessel recurrences) the
    # (1/u^2 + 1/w^2)^2 pieces cancel exactly against the right-hand side,
    # because n1^2 - neff^2 = u^2/(k0 a)^2 and neff^2 - n2^2 = w^2/(k0 a)^2.
    Xt = jv(0, u) / (u * jv(1, u))
    Yt = kv(0, w) / (w * kv(1, w))
    P = 1 / u ** 2 + 1 / w ** 2
    Q = n1 ** 2 * Xt - n2 ** 2 * Yt
    R = n1 ** 2 / u ** 2 + n2 ** 2 / w ** 2
    return (Xt - Yt) * (Q - R) - P * Q


def s_parameter(h, q, a):
    """s = (1/u^2 + 1/w^2) / (J1'(u)/(u J1(u)) + K1'(w)/(w K1(w)))."""
    u, w = h * a, q * a
    X, Y = _uw_terms(u, w)
    return (1 / u ** 2 + 1 / w ** 2) / (X + Y)


def solve_he11(wavelength: float, fiber: FiberSpec, rtol: float = 1e-12,
               n_scan: int = 10000) -> GuidedModeSolution:
    """Fundamental hybrid mode for one wavelength and fiber.

    The eigenvalue function is scanned in the exterior decay parameter
    w = q a (log-spaced near cutoff, where the weakly guided root lives)
    and the sign change with the largest beta that is a genuine root (not
    a J1 pole) is refined by Brent's method.
    """
    if not wavelength > 0:
        raise ConfigError(f"wavelength must be positive, got {wavelength}")
    n1, n2 = fiber.core_index(wavelength), fiber.n2
    if not n1 > n2:
        raise NoGuidedRoot(f"no index contrast (n1={n1}, n2={n2}): no bound mode")
    k0 = 2 * np.pi / wavelength
    a = fiber.radius
    V = k0 * a * np.sqrt(n1 ** 2 - n2 ** 2)

    def f_w(w):
        return _char_uw(np.sqrt(V ** 2 - w ** 2), w, n1, n2)

    w_grid = np.unique(np.concatenate([
        np.geomspace(V * 1e-60, V * 1e-3, n_scan // 2),
        np.linspace(V * 1e-3, V * (1 - 1e-12), n_scan // 2),
    ]))
    with np.errstate(all="ignore"):
        vals = f_w(w_grid)
    ok = np.isfinite(vals)
    w_grid, vals = w_grid[ok], vals[ok]
    flips = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    # largest beta <=> largest w; walk down from there
    for i in flips[::-1]:
        lo, hi = w_grid[i], w_grid[i + 1]
        try:
            w0 = brentq(f_w, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        except (RuntimeError, ValueError) as exc:
            raise NonConvergence(str(exc)) from exc
        scale = max(abs(vals[i]), abs(vals[i + 1]))
        with np.errstate(all="ignore"):
            resid = abs(f_w(w0))
        if np.isfinite(resid) and resid <= 1e-6 * scale:
            break
    else:
        raise NoGuidedRoot(f"no HE11 root found for V={V:.4g}")

    beta = np.sqrt(k0 ** 2 * n2 ** 2 + (w0 / a) ** 2)
    q = w0 / a
    h = np.sqrt(V ** 2 - w0 ** 2) / a
    # beta itself may round to k0 n2 deep in the weak-guidance limit
    if not (0 < w0 < V and k0 * n2 <= beta < k0 * n1):
        raise NonConvergence("root left the guided bracket")
    return GuidedModeSolution(wavelength=wavelength, fiber=fiber, beta=float(beta),
                              h=float(h), q=float(q), s=float(s_parameter(h, q, a)),
                              n1=n1)


# -- full circular-basis mode (used for power normalization)

def _circular_mode(sol: GuidedModeSolution, r):
    """(E_r, E_phi, E_z, dE_z/dr, d(r E_phi)/dr) of the p=+1 circular mode.

    Unit amplitude, exp(i(beta z + phi - w t)) stripped; valid for all r > 0.
    """
    r = np.asarray(r, dtype=float)
    a, h, q, b, s = sol.a, sol.h, sol.q, sol.beta, sol.s
    inside = r < a
    Er = np.empty(r.shape, complex)
    Ephi = np.empty(r.shape, complex)
    Ez = np.empty(r.shape, complex)
    dEz = np.empty(r.shape, complex)
    drEphi = np.empty(r.shape, complex)

    ri = r[inside]
    x = h * ri
    J0, J1, J2 = jv(0, x), jv(1, x), jv(2, x)
    Er[inside] = 1j * b / (2 * h) * ((1 - s) * J0 - (1 + s) * J2)
    Ephi[inside] = -b / (2 * h) * ((1 - s) * J0 + (1 + s) * J2)
    Ez[inside] = J1
    dEz[inside] = h * jvp(1, x)
    # d/dr [r (c0 J0(hr) + c2 J2(hr))] = c0 (J0 - x J1) + c2 (J2 + x J2')
    drEphi[inside] = -b / (2 * h) * ((1 - s) * (J0 - x * J1) + (1 + s) * (J2 + x * jvp(2, x)))

    ro = r[~inside]
    y = q * ro
    norm = jv(1, h * a) / kv(1, q * a)
    K0, K1, K2 = kv(0, y), kv(1, y), kv(2, y)
    Er[~inside] = 1j * b * norm / (2 * q) * ((1 - s) * K0 + (1 + s) * K2)
    Ephi[~inside] = -b * norm / (2 * q) * ((1 - s) * K0 - (1 + s) * K2)
    Ez[~inside] = norm * K1
    dEz[~inside] = norm * q * kvp(1, y)
    drEphi[~inside] = -b * norm / (2 * q) * ((1 - s) * (K0 - y * K1) - (1 + s) * (K2 + y * kvp(2, y)))
    return Er, Ephi, Ez, dEz, drEphi


def _circular_h_field(sol: GuidedModeSolution, r):
    """Magnetic field (H_r, H_phi, H_z) from Faraday's law, same phase factor."""
    r = np.asarray(r, dtype=float)
    Er, Ephi, Ez, dEz, drEphi = _circular_mode(sol, r)
    omega_mu = 2 * np.pi * C.c / sol.wavelength * C.mu0
    b = sol.beta
    Hr = (Ez / r - b * Ephi) / omega_mu
    Hphi = (b * Er + 1j * dEz) / omega_mu
    Hz = (drEphi - 1j * Er) / (1j * r * omega_mu)
    return Hr, Hphi, Hz


def _poynting_z(sol: GuidedModeSolution, r):
    """Time-averaged S_z (W/m^2 per unit |A|^2) of the circular mode."""
    Er, Ephi, _, _, _ = _circular_mode(sol, r)
    Hr, Hphi, _ = _circular_h_field(sol, r)
    return 0.5 * np.real(Er * np.conj(Hphi) - Ephi * np.conj(Hr))


def circular_mode_power(sol: GuidedModeSolution) -> float:
    """Power carried by the unit-amplitude circular mode (W per (V/m)^2)."""
    def f(r):
        return 2 * np.pi * r * _poynting_z(sol, np.array([r]))[0]
    a = sol.a
    inner, _ = integrate.quad(f, 0.0, a, epsabs=0, epsrel=1e-13, limit=200)
    # quad's infinite-range map misses a tail this thin; |K|^2 < e^-120 beyond 60/q
    edges = a + np.array([0.0, 0.5, 2.0, 8.0, 60.0]) / sol.q
    outer = sum(integrate.quad(f, lo, hi, epsabs=0, epsrel=1e-13, limit=200)[0]
                for lo, hi in zip(edges[:-1], edges[1:]))
    return inner + outer


def normalize_amplitude(sol: GuidedModeSolution, power: float) -> float:
    """Real amplitude A_lin of the quasi-linear mode carrying `power` watts.

    A linearly polarized mode is the equal-weight sum of the two circular
    modes at half amplitude each, so P_lin = |A_lin|^2 * P_circ / 2.
    """
    if power < 0:
        raise ConfigError(f"beam power must be non-negative, got {power}")
    if power == 0:
        return 0.0
    return float(np.sqrt(2 * power / circular_mode_power(sol)))


# -- exterior field in the literature convention

def mode_field_array(sol: GuidedModeSolution, amplitude: float, direction: str,
                     pol_angle: float, r, phi, z) -> np.ndarray:
    """Vectorized exterior field; returns an array of shape (..., 3)."""
    r, phi, z = np.broadcast_arrays(np.asarray(r, float), np.asarray(phi, float),
                                    np.asarray(z, float))
    if np.any(r < sol.a):
        raise InsideFiber(f"field requested inside the fiber (r < a = {sol.a})")
    a, h, q, b, s = sol.a, sol.h, sol.q, sol.beta, sol.s
    y = q * r
    norm = amplitude * jv(1, h * a) / kv(1, q * a)
    K0, K1, K2 = kv(0, y), kv(1, y), kv(2, y)
    pref = b * norm / (2 * q)
    A = pref * ((1 - s) * K0 * np.cos(pol_angle) + (1 + s) * K2 * np.cos(2 * phi - pol_angle))
    B = pref * ((1 - s) * K0 * np.sin(pol_angle) + (1 + s) * K2 * np.sin(2 * phi - pol_angle))
    Cz = norm * K1 * np.cos(phi - pol_angle)
    if direction == "forward":
        phase = np.exp(-1j * b * z)
        Ez = 1j * Cz
    elif direction == "backward":
        phase = np.exp(1j * b * z)
        Ez = -1j * Cz
    else:
        raise ConfigError(f"unknown direction {direction!r}")
    out = np.empty(r.shape + (3,), complex)
    out[..., 0] = A * phase
    out[..., 1] = B * phase
    out[..., 2] = Ez * phase
    return out


def mode_field(sol: GuidedModeSolution, beam: BeamSpec, point, amplitude=None) -> ComplexField:
    """Field of `beam` at `point` = (r, phi, z), r >= a."""
    r, phi, z = point
    if amplitude is None:
        amplitude = normalize_amplitude(sol, beam.power)
    E = mode_field_array(sol, amplitude, beam.direction, beam.polarization_angle, r, phi, z)
    return ComplexField(position=(r, phi, z), E_plus=E)


def check_group_wavelengths(beams: Sequence[BeamSpec], rtol: float = 1e-9):
    lams = [bm.wavelength for bm in beams]
    if lams and (max(lams) - min(lams)) > rtol * max(lams):
        raise MixedWavelengthGroup(
            f"beams in one coherence group differ in wavelength: {sorted(set(lams))}")


def superpose_group(beams: Iterable[BeamSpec], point, fiber: FiberSpec,
                    rtol: float = 1e-9) -> ComplexField:
    """Coherent sum of the fields of beams sharing one coherence group."""
    beams = list(beams)
    check_group_wavelengths(beams, rtol)
    total = np.zeros(3, complex)
    for bm in beams:
        sol = solve_he11(bm.wavelength, fiber)
        total = total + mode_field(sol, bm, point).E_plus
    return ComplexField(position=tuple(point), E_plus=total)
