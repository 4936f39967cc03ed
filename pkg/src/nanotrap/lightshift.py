"""ac-Stark Hamiltonian on one hyperfine manifold for multi-beam fields.

Conventions
-----------
* Field amplitudes E are the complex vectors produced by
  :mod:`nanotrap.waveguide`; |E|^2 = 2 I / (c eps0).
* The operator is
  H = -1/4 [a0 E*.E + i a1 (E* x E).F/F
            + a2 3/(F(2F-1)) sum_ij E*_i E_j ((F_i F_j + F_j F_i)/2 - F^2 d_ij/3)],
  which makes the ground-state scalar shift negative for red detuning.
  Matrices are returned as energy/h in Hz, basis |F, m> with m = -F..F.
* Beams in different coherence groups never interfere: their frequency
  offset averages the cross terms to zero on the atomic time scales, so
  each group contributes its own Hamiltonian built with polarizabilities at
  that group's optical frequency.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import constants as C
from .atomic import AtomDatabase, default_database
from .errors import ConfigError, DimensionMismatch, ZeroField
from .polarizability import PolarizabilitySet, polarizabilities
from .waveguide import (BeamSpec, ComplexField, FiberSpec, check_group_wavelengths,
                        mode_field_array, normalize_amplitude, solve_he11)


@dataclass(frozen=True)
class Manifold:
    """Hyperfine manifold |level, F, m>, m ascending from -F."""
    level: str
    F: float

    @property
    def dim(self) -> int:
        return int(round(2 * self.F)) + 1

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(self.dim) - self.F

    def __str__(self):
        return f"{self.level}:F={self.F:g}"


@lru_cache(maxsize=None)
def angular_momentum(F: float):
    """(F_x, F_y, F_z) matrices in the |F, m> basis, m ascending."""
    m = np.arange(int(round(2 * F)) + 1) - F
    Fz = np.diag(m).astype(complex)
    up = np.diag(np.sqrt(F * (F + 1) - m[:-1] * (m[:-1] + 1)), -1).astype(complex)
    Fx = (up + up.conj().T) / 2
    Fy = (up - up.conj().T) / 2j
    out = (Fx, Fy, Fz)
    for M in out:
        M.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _tensor_basis(F: float):
    """Q_ij = (F_i F_j + F_j F_i)/2 - F(F+1)/3 delta_ij, shape (3, 3, d, d)."""
    Fs = angular_momentum(F)
    d = Fs[0].shape[0]
    Q = np.empty((3, 3, d, d), complex)
    for i in range(3):
        for j in range(3):
            Q[i, j] = (Fs[i] @ Fs[j] + Fs[j] @ Fs[i]) / 2
            if i == j:
                Q[i, j] -= F * (F + 1) / 3 * np.eye(d)
    Q.setflags(write=False)
    return Q


@dataclass(frozen=True)
class EllipticityVector:
    position: tuple
    vector: np.ndarray


def ellipticity_array(E) -> np.ndarray:
    """Im[E* x E] / (E*.E) for an array of fields (..., 3)."""
    E = np.asarray(E, complex)
    norm = np.sum(np.abs(E) ** 2, axis=-1)
    cross = np.cross(np.conj(E), E)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.imag(cross) / norm[..., None]


def ellipticity_vector(field: ComplexField) -> EllipticityVector:
    """Normalized ellipticity vector of one field.

    For a field transverse to z its z component is the Stokes ratio
    (|E_+1|^2 - |E_-1|^2) / (|E_+1|^2 + |E_-1|^2).
    """
    E = np.asarray(field.E_plus, complex)
    if not np.any(E):
        raise ZeroField("ellipticity undefined for a zero field")
    return EllipticityVector(field.position, ellipticity_array(E))


def stark_matrix(E, pols: PolarizabilitySet, F: float) -> np.ndarray:
    """Vectorized core: fields (..., 3) in V/m -> H/h (..., d, d) in Hz."""
    E = np.asarray(E, complex)
    if E.shape[-1] != 3:
        raise DimensionMismatch("field must have 3 Cartesian components")
    p = pols.si()
    if abs(p.F - F) > 1e-12:
        raise DimensionMismatch(f"polarizabilities for F={p.F} used on F={F} manifold")
    d = int(round(2 * F)) + 1
    Ec = np.conj(E)
    scal = np.sum(Ec * E, axis=-1).real
    H = p.alpha0 * scal[..., None, None] * np.eye(d)
    if F > 0 and p.alpha1 != 0.0:
        cross = np.cross(Ec, E)  # purely imaginary
        Fs = np.stack(angular_momentum(F))
        H = H + 1j * p.alpha1 / F * np.einsum("...k,kab->...ab", cross, Fs)
    if F >= 1 and p.alpha2 != 0.0:
        T = Ec[..., :, None] * E[..., None, :]
        H = H + p.alpha2 * 3 / (F * (2 * F - 1)) * np.einsum("...ij,ijab->...ab", T,
                                                             _tensor_basis(F))
    return -0.25 * H / C.h


def stark_hamiltonian(field, pols: PolarizabilitySet, manifold: Manifold) -> np.ndarray:
    """H/h (Hz) on `manifold` for one coherent field."""
    E = field.E_plus if isinstance(field, ComplexField) else field
    E = np.asarray(E, complex)
    if E.shape != (3,):
        raise DimensionMismatch("stark_hamiltonian takes a single 3-component field")
    if pols.level != manifold.level:
        raise DimensionMismatch(f"polarizabilities for {pols.level} used on {manifold.level}")
    return stark_matrix(E, pols, manifold.F)


def stark_parts(E, pols: PolarizabilitySet, F: float):
    """(H0, H1, H2) scalar, vector and tensor blocks separately (Hz)."""
    zero = dict(alpha0=0.0, alpha1=0.0, alpha2=0.0)
    out = []
    for key in ("alpha0", "alpha1", "alpha2"):
        kw = dict(zero)
        kw[key] = getattr(pols, key)
        out.append(stark_matrix(E, PolarizabilitySet(pols.level, pols.J, pols.F, pols.omega,
                                                      unit=pols.unit, **kw), F))
    return tuple(out)


# -- coherence groups and multi-beam assembly

@lru_cache(maxsize=256)
def _mode(lam: float, fiber: FiberSpec):
    sol = solve_he11(lam, fiber)
    return sol


@lru_cache(maxsize=1024)
def _amplitude(lam: float, fiber: FiberSpec, power: float):
    return normalize_amplitude(_mode(lam, fiber), power)


def beam_field_array(beam: BeamSpec, fiber: FiberSpec, r, phi, z) -> np.ndarray:
    sol = _mode(beam.wavelength, fiber)
    amp = _amplitude(beam.wavelength, fiber, beam.power)
    return mode_field_array(sol, amp, beam.direction, beam.polarization_angle, r, phi, z)


def coherence_groups(beams: Sequence[BeamSpec]) -> Dict[int, List[BeamSpec]]:
    groups: Dict[int, List[BeamSpec]] = {}
    for bm in beams:
        groups.setdefault(bm.coherence_group, []).append(bm)
    for members in groups.values():
        check_group_wavelengths(members)
        offs = {bm.detuning_offset for bm in members}
        if len(offs) > 1:
            raise ConfigError("beams in one coherence group must share one optical frequency")
    return dict(sorted(groups.items()))


@lru_cache(maxsize=4096)
def _cached_pols(level: str, F: float, omega: float, db: AtomDatabase) -> PolarizabilitySet:
    return polarizabilities(level, F, omega, db)


def group_fields(beams: Sequence[BeamSpec], fiber: FiberSpec, r, phi, z):
    """[(group beams, summed field array)] for every coherence group."""
    out = []
    for members in coherence_groups(beams).values():
        E = sum(beam_field_array(bm, fiber, r, phi, z) for bm in members)
        out.append((members, E))
    return out


def total_stark_array(config, manifold: Manifold, r, phi, z,
                      db: Optional[AtomDatabase] = None) -> np.ndarray:
    """Vectorized total light-shift Hamiltonian (..., d, d) in Hz."""
    db = db or config.database
    r, phi, z = np.broadcast_arrays(np.asarray(r, float), np.asarray(phi, float),
                                    np.asarray(z, float))
    H = np.zeros(r.shape + (manifold.dim, manifold.dim), complex)
    for members, E in group_fields(config.beams, config.fiber, r, phi, z):
        pols = _cached_pols(manifold.level, manifold.F, members[0].angular_frequency, db)
        H += stark_matrix(E, pols, manifold.F)
    return H


def total_stark_hamiltonian(point, config, manifold: Manifold,
                            db: Optional[AtomDatabase] = None) -> np.ndarray:
    """Sum over coherence groups of the group Hamiltonians at one point."""
    r, phi, z = point
    return total_stark_array(config, manifold, r, phi, z, db)


def time_averaged_stark_hamiltonian(point, config, manifold: Manifold, n_samples: int = 64,
                                    db: Optional[AtomDatabase] = None) -> np.ndarray:
    """Check mode: average the instantaneous Hamiltonian over one beat period.

    Groups sharing a nominal wavelength (a frequency-offset pair) are added
    coherently with relative phases exp(-2 pi i f_k t) and the full
    sesquilinear form is sampled on ``n_samples`` points of the slowest
    beat period.  Same-group products use the polarizability at the group's
    frequency, cross products the one at the mean of the two frequencies.
    Groups at different wavelengths beat at optical frequencies and are
    added incoherently.  The result should match
    :func:`total_stark_hamiltonian`.
    """
    db = db or config.database
    r, phi, z = point
    F = manifold.F
    clusters: Dict[float, list] = {}
    for members in coherence_groups(config.beams).values():
        key = round(members[0].wavelength * 1e15)
        E = sum(beam_field_array(b, config.fiber, r, phi, z) for b in members)
        clusters.setdefault(key, []).append((E, members[0].frequency))
    H = np.zeros((manifold.dim, manifold.dim), complex)
    for _, items in sorted(clusters.items()):
        beats = [abs(f1 - f2) for _, f1 in items for _, f2 in items if f1 != f2]
        times = (np.arange(n_samples) / (n_samples * min(beats))) if beats else np.zeros(1)
        for t in times:
            for Ei, fi in items:
                for Ej, fj in items:
                    pols = _cached_pols(manifold.level, F, np.pi * (fi + fj), db)
                    phase = np.exp(-2j * np.pi * (fj - fi) * t)
                    H += _bilinear(Ei, Ej * phase, pols, F) / len(times)
    return H


def _bilinear(Ea, Eb, pols: PolarizabilitySet, F: float) -> np.ndarray:
    """Operator -1/4 [E_a* . alpha . E_b] / h (the sesquilinear form of H)."""
    p = pols.si()
    d = int(round(2 * F)) + 1
    Ea, Eb = np.conj(np.asarray(Ea, complex)), np.asarray(Eb, complex)
    H = p.alpha0 * np.dot(Ea, Eb) * np.eye(d)
    if F > 0:
        H = H + 1j * p.alpha1 / F * np.einsum("k,kab->ab", np.cross(Ea, Eb),
                                              np.stack(angular_momentum(F)))
    if F >= 1:
        H = H + p.alpha2 * 3 / (F * (2 * F - 1)) * np.einsum(
            "ij,ijab->ab", Ea[:, None] * Eb[None, :], _tensor_basis(F))
    return -0.25 * H / C.h
