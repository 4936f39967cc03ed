"""Adiabatic trap potentials: scans, minimum search, harmonic fits, splittings.

Coordinates are cylindrical (r, phi, z) with the fiber along z.  Scans use
the distance from the surface d = r - a for the radial axis, phi in radians
and z in metres; z = 0 is an antinode of any counter-propagating
same-frequency pair.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from . import constants as C
from .atomic import AtomDatabase, default_database
from .errors import ConfigError, NoMinimum, NonPositiveFrequency, PoorFit
from .lightshift import Manifold, angular_momentum, coherence_groups, total_stark_array
from .surface import SurfaceModel, surface_potential
from .waveguide import BeamSpec, FiberSpec, solve_he11

log = logging.getLogger(__name__)

GROUND_F3 = Manifold("6S1/2", 3.0)
GROUND_F4 = Manifold("6S1/2", 4.0)
EXCITED_F4 = Manifold("6P3/2", 4.0)
DEFAULT_MANIFOLDS = (GROUND_F3, GROUND_F4, EXCITED_F4)

D_MIN = 20e-9            # closest approach to the surface for any scan
CHUNK = 8192             # points per vectorized block


@dataclass(frozen=True)
class TrapConfiguration:
    """Fiber, beams and surface model of one trap.

    ``delta_fb`` (Hz) documents the frequency offset of a compensating
    forward/backward pair; when it is nonzero some two beams must differ in
    frequency by it (and hence sit in distinct coherence groups).
    """
    fiber: FiberSpec
    beams: Tuple[BeamSpec, ...]
    surface: SurfaceModel = SurfaceModel()
    manifolds: Tuple[Manifold, ...] = DEFAULT_MANIFOLDS
    delta_fb: float = 0.0
    database: Optional[AtomDatabase] = field(default=None, compare=False)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "beams", tuple(self.beams))
        object.__setattr__(self, "manifolds", tuple(self.manifolds))
        if not self.beams:
            raise ConfigError("a trap needs at least one beam")
        coherence_groups(self.beams)
        if self.delta_fb:
            freqs = [b.frequency for b in self.beams]
            ok = any(abs(abs(f1 - f2) - abs(self.delta_fb)) < 1e-3 * abs(self.delta_fb)
                     for i, f1 in enumerate(freqs) for f2 in freqs[i + 1:])
            if not ok:
                raise ConfigError("delta_fb set but no pair of beams is offset by it")
        if self.database is None:
            object.__setattr__(self, "database", default_database())

    @property
    def a(self) -> float:
        return self.fiber.radius

    def lattice_period(self) -> float:
        """pi / beta of the shortest-wavelength standing-wave pair, else of the longest beam."""
        pairs = []
        for members in coherence_groups(self.beams).values():
            dirs = {b.direction for b in members}
            if len(dirs) == 2:
                pairs.append(members[0].wavelength)
        lam = max(pairs) if pairs else max(b.wavelength for b in self.beams)
        return np.pi / solve_he11(lam, self.fiber).beta


def compensated_pair(wavelength: float, power: float, delta_fb: float,
                     polarization_angle: float = 0.0, groups=(1, 2), name: str = "blue"):
    """Forward beam at +delta_fb/2 and backward beam at -delta_fb/2, incoherent."""
    if groups[0] == groups[1]:
        raise ConfigError("a compensated pair needs two distinct coherence groups")
    return (BeamSpec(wavelength, power, "forward", polarization_angle, groups[0],
                     delta_fb / 2, name + "_fwd"),
            BeamSpec(wavelength, power, "backward", polarization_angle, groups[1],
                     -delta_fb / 2, name + "_bwd"))


# -- batched evaluation

def _map_chunks(func: Callable, arrays, threads: int = 1):
    """Apply func to flattened chunks of broadcast arrays; results in grid order."""
    arrays = np.broadcast_arrays(*[np.asarray(x, float) for x in arrays])
    shape = arrays[0].shape
    flat = [x.ravel() for x in arrays]
    n = flat[0].size
    starts = list(range(0, n, CHUNK)) or [0]
    pieces = [[x[s:s + CHUNK] for x in flat] for s in starts]
    if threads > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(lambda p: func(*p), pieces))
    else:
        out = [func(*p) for p in pieces]
    res = np.concatenate(out, axis=0)
    return res.reshape(shape + res.shape[1:])


def total_hamiltonian(config: TrapConfiguration, manifold: Manifold, r, phi, z) -> np.ndarray:
    """Light shift plus surface term, (..., d, d) in Hz."""
    r = np.asarray(r, float)
    H = total_stark_array(config, manifold, r, phi, z, config.database)
    U = surface_potential(np.broadcast_to(r, H.shape[:-2]) - config.a, manifold, config.surface)
    idx = np.arange(manifold.dim)
    H[..., idx, idx] += np.asarray(U)[..., None]
    return H


def potential_levels(config: TrapConfiguration, manifold: Manifold, r, phi, z,
                     threads: int = 1) -> np.ndarray:
    """Sorted adiabatic eigenvalues (..., 2F+1) in Hz."""
    def block(r, phi, z):
        return np.linalg.eigvalsh(total_hamiltonian(config, manifold, r, phi, z))
    return _map_chunks(block, (r, phi, z), threads)


def mean_potential(config: TrapConfiguration, manifold: Manifold, r, phi, z,
                   threads: int = 1) -> np.ndarray:
    """Sublevel-averaged potential Tr(H)/(2F+1) in Hz (no diagonalization)."""
    def block(r, phi, z):
        H = total_hamiltonian(config, manifold, r, phi, z)
        return np.real(np.trace(H, axis1=-2, axis2=-1)) / manifold.dim
    return _map_chunks(block, (r, phi, z), threads)


def reduced_potential(config, manifold, r, phi, z, reduce: str = "mean", threads: int = 1):
    """One scalar landscape per point: 'mean' of the sublevels or the 'lowest'."""
    if reduce == "mean":
        return mean_potential(config, manifold, r, phi, z, threads)
    if reduce == "lowest":
        return potential_levels(config, manifold, r, phi, z, threads)[..., 0]
    raise ConfigError(f"unknown potential reduction {reduce!r}")


@dataclass(frozen=True)
class AdiabaticLevels:
    point: Tuple[float, float, float]
    manifold: Manifold
    eigenvalues: np.ndarray     # Hz, ascending
    eigenvectors: np.ndarray    # columns, |F, m> basis


def adiabatic_levels(point, config: TrapConfiguration, manifold: Manifold) -> AdiabaticLevels:
    """Eigen-decomposition of the total Hamiltonian at one point."""
    r, phi, z = (float(x) for x in point)
    H = total_hamiltonian(config, manifold, r, phi, z)
    w, v = np.linalg.eigh(H)
    return AdiabaticLevels((r, phi, z), manifold, w, v)


# -- excited-state branch tracking

def axis_state(F: float, m: float, axis: str = "x") -> np.ndarray:
    """|F, m> quantized along x, y or z, written in the z basis."""
    dim = int(round(2 * F)) + 1
    e = np.zeros(dim, complex)
    e[int(round(m + F))] = 1.0
    Fx, Fy, Fz = angular_momentum(F)
    if axis == "z":
        return e
    if axis == "x":
        return expm(-0.5j * np.pi * Fy) @ e
    if axis == "y":
        return expm(0.5j * np.pi * Fx) @ e
    raise ConfigError(f"unknown quantization axis {axis!r}")


def branch_potential(config: TrapConfiguration, r, phi, z, manifold: Manifold = EXCITED_F4,
                     m: float = 0.0, axis: str = "x", threads: int = 1) -> np.ndarray:
    """Eigenvalue (Hz) of the adiabatic state with largest overlap with |m>_axis."""
    ref = axis_state(manifold.F, m, axis)

    def block(r, phi, z):
        w, v = np.linalg.eigh(total_hamiltonian(config, manifold, r, phi, z))
        ov = np.abs(np.einsum("a,...ab->...b", ref.conj(), v)) ** 2
        return np.take_along_axis(w, np.argmax(ov, axis=-1)[..., None], -1)[..., 0]
    return _map_chunks(block, (r, phi, z), threads)


# -- scans

@dataclass(frozen=True)
class ScanGrid:
    """1D scan: axis 'radial' (coordinate d = r - a), 'azimuthal' (phi) or 'axial' (z).

    The two fixed coordinates come from ``d``, ``phi`` and ``z``.
    """
    axis: str
    start: float
    stop: float
    n: int
    d: float = 200e-9
    phi: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if self.axis not in ("radial", "azimuthal", "axial"):
            raise ConfigError(f"unknown scan axis {self.axis!r}")
        if self.n < 1:
            raise ConfigError("scan needs at least one point")

    def coords(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.n)

    def points(self, a: float):
        c = self.coords()
        if self.axis == "radial":
            d = c
        else:
            d = np.full_like(c, self.d)
        if np.any(d < D_MIN):
            raise ConfigError(f"scan grid closer than {D_MIN * 1e9:.0f} nm to the surface")
        phi = c if self.axis == "azimuthal" else np.full_like(c, self.phi)
        z = c if self.axis == "axial" else np.full_like(c, self.z)
        return a + d, phi, z


@dataclass(frozen=True)
class ScanResult:
    grid: ScanGrid
    manifold: Manifold
    coords: np.ndarray
    energies: np.ndarray     # (N, 2F+1) Hz, ascending per point

    def rows(self):
        """(coord, eigenvalue_index, manifold, energy_hz, energy_mk) per point and level."""
        for c, levels in zip(self.coords, self.energies):
            for k, e in enumerate(levels):
                yield float(c), k, str(self.manifold), float(e), float(C.hz_to_mk(e))


def scan_potential(config: TrapConfiguration, manifold: Manifold, grid: ScanGrid,
                   threads: int = 1) -> ScanResult:
    r, phi, z = grid.points(config.a)
    E = potential_levels(config, manifold, r, phi, z, threads)
    return ScanResult(grid, manifold, grid.coords(), E)


# -- minimum search

@dataclass(frozen=True)
class TrapMinimum:
    r: float
    phi: float
    z: float
    depth_hz: float           # U(min) relative to U(infinity) = 0
    saddle_depth_hz: float    # U(min) relative to the barrier toward the surface
    manifold: Manifold
    reduce: str
    a: float                  # fiber radius

    @property
    def distance(self) -> float:
        """r - a."""
        return self.r - self.a

    @property
    def location(self):
        return (self.r, self.phi, self.z)

    @property
    def depth_mk(self) -> float:
        return float(C.hz_to_mk(self.depth_hz))

    @property
    def saddle_depth_mk(self) -> float:
        return float(C.hz_to_mk(self.saddle_depth_hz))


def _local_minima(U: np.ndarray) -> np.ndarray:
    """Mask of strict local minima; axis 0 bounded, axes 1 and 2 periodic."""
    mask = np.ones(U.shape, bool)
    mask[0] = mask[-1] = False
    for ax in range(3):
        for shift in (1, -1):
            nb = np.roll(U, shift, axis=ax)
            mask &= U < nb if ax else U <= nb
    return mask


def find_trap_minimum(config: TrapConfiguration, manifold: Manifold = GROUND_F4,
                      reduce: str = "mean", threads: int = 1,
                      n_r: int = 100, n_phi: int = 72, n_z: int = 50,
                      d_range=(50e-9, 600e-9), xtol: float = 0.1e-9) -> TrapMinimum:
    """Coarse 3D grid, then Nelder-Mead on the reduced potential.

    Raises NoMinimum when the grid holds no interior local minimum with
    negative energy.
    """
    a = config.a
    period = config.lattice_period()
    d = np.linspace(*d_range, n_r)
    phi = np.linspace(0, 2 * np.pi, n_phi, endpoint=False)
    z = np.linspace(0, period, n_z, endpoint=False)
    R, P, Z = np.meshgrid(a + d, phi, z, indexing="ij")
    U = reduced_potential(config, manifold, R, P, Z, reduce, threads)
    cand = _local_minima(U) & (U < 0)
    if not cand.any():
        raise NoMinimum("potential has no interior local minimum (repulsion or surface "
                        "attraction dominates everywhere)")
    idx = np.unravel_index(np.argmin(np.where(cand, U, np.inf)), U.shape)
    x0 = np.array([d[idx[0]], phi[idx[1]] * (a + d[idx[0]]), z[idx[2]]]) * 1e9

    def f(x):
        dd, arc, zz = x * 1e-9
        if dd < D_MIN:
            return 1e30
        r = a + dd
        return float(reduced_potential(config, manifold, r, arc / r, zz, reduce))
    res = minimize(f, x0, method="Nelder-Mead",
                   options=dict(xatol=xtol * 1e9, fatol=1e-6, maxiter=4000))
    dd, arc, zz = res.x * 1e-9
    r = a + dd
    phi0 = float(np.mod(arc / r, 2 * np.pi))
    U0 = float(res.fun)
    # barrier between the minimum and the surface along the same radial line
    dl = np.linspace(D_MIN, dd, 400)
    Ul = reduced_potential(config, manifold, a + dl, phi0, zz, reduce)
    barrier = float(np.max(Ul))
    return TrapMinimum(r, phi0, float(zz), U0, U0 - barrier, manifold, reduce, a)


# -- harmonic fits

@dataclass(frozen=True)
class HarmonicFit:
    axis: str
    frequency: float     # Hz
    curvature: float     # J/m^2
    r_squared: float


def fit_harmonic(x: np.ndarray, U_hz: np.ndarray, mass: float, axis: str = "",
                 min_r2: float = 0.99) -> HarmonicFit:
    """Quadratic least squares of U (Hz) against displacement x (m)."""
    U = np.asarray(U_hz, float)
    scale = np.max(np.abs(x)) or 1.0
    u = np.asarray(x) / scale
    A = np.vstack([np.ones_like(u), u, u * u]).T
    coef, *_ = np.linalg.lstsq(A, U, rcond=None)
    resid = U - A @ coef
    ss = np.sum((U - U.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / ss if ss > 0 else 0.0
    k = 2 * coef[2] * C.h / scale ** 2
    if r2 < min_r2:
        raise PoorFit(f"{axis}: quadratic fit R^2 = {r2:.4f} < {min_r2}")
    if not k > 0:
        raise PoorFit(f"{axis}: negative curvature, not a minimum")
    return HarmonicFit(axis, float(np.sqrt(k / mass) / (2 * np.pi)), float(k), float(r2))


def trap_frequencies(config: TrapConfiguration, minimum: TrapMinimum, manifold=None,
                     reduce: Optional[str] = None, radial_window: float = 10e-9,
                     azimuthal_window: float = np.deg2rad(5.0), axial_window: float = 10e-9,
                     n: int = 41) -> Dict[str, HarmonicFit]:
    """Harmonic frequencies along r, the azimuthal arc and z."""
    manifold = manifold or minimum.manifold
    reduce = reduce or minimum.reduce
    mass = config.database.mass
    r0, p0, z0 = minimum.location
    out = {}
    x = np.linspace(-radial_window, radial_window, n)
    out["r"] = fit_harmonic(x, reduced_potential(config, manifold, r0 + x, p0, z0, reduce),
                            mass, "radial")
    x = np.linspace(-azimuthal_window, azimuthal_window, n) * r0
    out["phi"] = fit_harmonic(x, reduced_potential(config, manifold, r0, p0 + x / r0, z0, reduce),
                              mass, "azimuthal")
    x = np.linspace(-axial_window, axial_window, n)
    out["z"] = fit_harmonic(x, reduced_potential(config, manifold, r0, p0, z0 + x, reduce),
                            mass, "axial")
    return out


def motional_width(nu: float, mass: float = None) -> float:
    """Ground-state half-width sqrt(hbar / (4 pi m nu)) in metres."""
    if not nu > 0:
        raise NonPositiveFrequency(f"trap frequency must be positive, got {nu}")
    mass = default_database().mass if mass is None else mass
    return float(np.sqrt(C.hbar / (4 * np.pi * mass * nu)))


# -- splittings and coherence estimates

@dataclass(frozen=True)
class SplittingMap:
    arc: np.ndarray          # m, signed arc length from the minimum
    phi: np.ndarray          # rad
    splitting: np.ndarray    # Hz, max - min eigenvalue of the manifold
    clock: np.ndarray        # Hz, mean(F=4) - mean(F=3) shift of the hyperfine transition


def splitting_map(config: TrapConfiguration, minimum: TrapMinimum,
                  manifold: Manifold = GROUND_F4, half_width: float = 40e-9, n: int = 81,
                  threads: int = 1) -> SplittingMap:
    """Sublevel splitting and clock shift along the azimuthal arc through the minimum."""
    r0, p0, z0 = minimum.location
    arc = np.linspace(-half_width, half_width, n)
    phi = p0 + arc / r0
    E = potential_levels(config, manifold, r0, phi, z0, threads)
    clock = (mean_potential(config, GROUND_F4, r0, phi, z0, threads)
             - mean_potential(config, GROUND_F3, r0, phi, z0, threads))
    return SplittingMap(arc, phi, E[:, -1] - E[:, 0], clock)


@dataclass(frozen=True)
class Coherence:
    sigma: float              # m, azimuthal motional half-width
    splitting_min: float      # Hz at the minimum
    splitting_sigma: float    # Hz at one sigma of arc
    clock_spread: float       # Hz, |clock(phi0) - clock(phi0 + sigma_phi)|
    tau: float                # s, 1 / splitting_min
    tau_m_zeeman: float       # s, 1 / splitting_sigma
    tau_m_clock: float        # s, 1 / clock_spread


def coherence_estimates(config: TrapConfiguration, minimum: TrapMinimum, nu_phi: float,
                        manifold: Manifold = GROUND_F4) -> Coherence:
    sigma = motional_width(nu_phi, config.database.mass)
    r0, p0, z0 = minimum.location
    phi = np.array([p0, p0 + sigma / r0])
    E = potential_levels(config, manifold, r0, phi, z0)
    split = E[:, -1] - E[:, 0]
    clock = (mean_potential(config, GROUND_F4, r0, phi, z0)
             - mean_potential(config, GROUND_F3, r0, phi, z0))
    spread = float(abs(clock[0] - clock[1]))
    inv = lambda x: float(np.inf) if x == 0 else 1.0 / x
    return Coherence(sigma, float(split[0]), float(split[1]), spread,
                     inv(split[0]), inv(split[1]), inv(spread))


# -- excited-state trapping

def has_interior_minimum(values: np.ndarray, margin: float = 0.0) -> bool:
    """True if the lowest sample is interior and below both ends by more than margin."""
    v = np.asarray(values)
    i = int(np.argmin(v))
    return 0 < i < v.size - 1 and v[i] < min(v[0], v[-1]) - margin


@dataclass(frozen=True)
class ExcitedTrapping:
    trapped: Dict[str, bool]           # per axis r, phi, z
    location: Tuple[float, float, float]
    depth_hz: float
    offset: float                      # m, distance to the ground minimum

    @property
    def trapped_all(self) -> bool:
        return all(self.trapped.values())


def excited_trapping(config: TrapConfiguration, ground: TrapMinimum,
                     manifold: Manifold = EXCITED_F4, m: float = 0.0, axis: str = "x",
                     radial_window: float = 100e-9, azimuthal_window: float = np.deg2rad(15.0),
                     n: int = 101) -> ExcitedTrapping:
    """Check the |F', m'> branch for confinement around the ground minimum."""
    r0, p0, z0 = ground.location
    a = config.a
    qw = config.lattice_period() / 2
    f = lambda r, p, z: branch_potential(config, r, p, z, manifold, m, axis)
    dr = np.linspace(max(D_MIN + a, r0 - radial_window), r0 + radial_window, n)
    dp = np.linspace(-azimuthal_window, azimuthal_window, n) + p0
    dz = np.linspace(-qw, qw, n) + z0
    trapped = {"r": bool(has_interior_minimum(f(dr, p0, z0))),
               "phi": bool(has_interior_minimum(f(r0, dp, z0))),
               "z": bool(has_interior_minimum(f(r0, p0, dz)))}

    def g(x):
        dd, arc, zz = x * 1e-9
        if dd < D_MIN:
            return 1e30
        r = a + dd
        return float(f(r, arc / r, zz))
    x0 = np.array([r0 - a, p0 * r0, z0]) * 1e9
    res = minimize(g, x0, method="Nelder-Mead", options=dict(xatol=0.1, fatol=1e-6, maxiter=4000))
    dd, arc, zz = res.x * 1e-9
    r = a + dd
    loc = (r, arc / r, zz)
    # Euclidean distance between the two minima
    p1 = np.array([r * np.cos(loc[1]), r * np.sin(loc[1]), zz])
    p2 = np.array([r0 * np.cos(p0), r0 * np.sin(p0), z0])
    return ExcitedTrapping(trapped, loc, float(res.fun), float(np.linalg.norm(p1 - p2)))


# -- full characterization

@dataclass(frozen=True)
class TrapCharacterization:
    minimum: TrapMinimum
    frequencies: Dict[str, HarmonicFit]
    coherence: Coherence
    excited: Optional[ExcitedTrapping]

    def as_dict(self) -> dict:
        m = self.minimum
        c = self.coherence
        out = {
            "minimum": {"r_m": m.r, "d_m": m.distance, "phi_rad": m.phi, "z_m": m.z},
            "depth": {"hz": m.depth_hz, "mk": m.depth_mk},
            "saddle_depth": {"hz": m.saddle_depth_hz, "mk": m.saddle_depth_mk},
            "potential": {"manifold": str(m.manifold), "reduce": m.reduce},
            "frequencies_hz": {k: v.frequency for k, v in self.frequencies.items()},
            "fit_r_squared": {k: v.r_squared for k, v in self.frequencies.items()},
            "motional_width_m": c.sigma,
            "splitting_at_minimum_hz": c.splitting_min,
            "splitting_at_sigma_hz": c.splitting_sigma,
            "clock_spread_hz": c.clock_spread,
            "tau_s": c.tau,
            "tau_m_zeeman_s": c.tau_m_zeeman,
            "tau_m_clock_s": c.tau_m_clock,
        }
        if self.excited is not None:
            e = self.excited
            out["excited"] = {"trapped": dict(e.trapped), "trapped_all": e.trapped_all,
                              "location": list(e.location), "depth_hz": e.depth_hz,
                              "depth_mk": float(C.hz_to_mk(e.depth_hz)),
                              "offset_m": e.offset}
        return out


def characterize(config: TrapConfiguration, reduce: str = "mean", threads: int = 1,
                 excited: bool = True) -> TrapCharacterization:
    minimum = find_trap_minimum(config, GROUND_F4, reduce, threads)
    freqs = trap_frequencies(config, minimum)
    coh = coherence_estimates(config, minimum, freqs["phi"].frequency)
    exc = excited_trapping(config, minimum) if excited else None
    return TrapCharacterization(minimum, freqs, coh, exc)
