import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import jv, jvp, kv, kvp

from nanotrap import constants as C
from nanotrap.errors import InsideFiber, MixedWavelengthGroup, NoGuidedRoot
from nanotrap.waveguide import (BeamSpec, FiberSpec, _circular_mode, characteristic,
                                mode_field, mode_field_array, normalize_amplitude,
                                s_parameter, silica_index, solve_he11, superpose_group)

FIBER = FiberSpec(250e-9)


@pytest.fixture(scope="module")
def sol937():
    return solve_he11(937e-9, FIBER)


@pytest.fixture(scope="module")
def sol1064():
    return solve_he11(1064e-9, FIBER)


# -- special functions

@pytest.mark.parametrize("x", [0.1, 0.7, 1.5, 3.0, 7.5, 14.0, 20.0])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_bessel_against_mpmath(n, x):
    assert jv(n, x) == pytest.approx(float(mpmath.besselj(n, x)), rel=1e-12, abs=1e-15)
    assert kv(n, x) == pytest.approx(float(mpmath.besselk(n, x)), rel=1e-12)
    dj = float(mpmath.diff(lambda t: mpmath.besselj(n, t), x))
    dk = float(mpmath.diff(lambda t: mpmath.besselk(n, t), x))
    assert jvp(n, x) == pytest.approx(dj, rel=1e-11, abs=1e-14)
    assert kvp(n, x) == pytest.approx(dk, rel=1e-11)


def test_silica_index_near_145():
    assert 1.449 < silica_index(937e-9) < 1.453
    assert silica_index(687e-9) > silica_index(1064e-9)


# -- dispersion

def _textbook_eigenfunction(beta, lam, a, n1, n2):
    """Exact HE/EH eigenvalue equation of a step-index cylinder, product form."""
    k = 2 * np.pi / lam
    u = a * np.sqrt(k ** 2 * n1 ** 2 - beta ** 2)
    w = a * np.sqrt(beta ** 2 - k ** 2 * n2 ** 2)
    Jt = jvp(1, u) / (u * jv(1, u))
    Kt = kvp(1, w) / (w * kv(1, w))
    lhs = (Jt + Kt) * (Jt + (n2 / n1) ** 2 * Kt)
    rhs = (beta / (k * n1)) ** 2 * (1 / u ** 2 + 1 / w ** 2) ** 2
    return lhs - rhs


def _independent_root(lam, fiber):
    n1, n2 = fiber.core_index(lam), fiber.n2
    k = 2 * np.pi / lam
    grid = np.linspace(k * n2, k * n1, 10001)[1:-1]
    with np.errstate(all="ignore"):
        f = _textbook_eigenfunction(grid, lam, fiber.radius, n1, n2)
    roots = []
    for i in np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0]:
        lo, hi = grid[i], grid[i + 1]
        flo = f[i]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = _textbook_eigenfunction(mid, lam, fiber.radius, n1, n2)
            if np.sign(fm) == np.sign(flo):
                lo, flo = mid, fm
            else:
                hi = mid
        # reject J1 poles: a true root has a small residual on both sides
        if abs(_textbook_eigenfunction(0.5 * (lo + hi), lam, fiber.radius, n1, n2)) < 1e-6 * max(
                abs(f[i]), abs(f[i + 1])):
            roots.append(0.5 * (lo + hi))
    return max(roots)


@pytest.mark.parametrize("lam", [687e-9, 852e-9, 937e-9, 1064e-9])
def test_beta_matches_independent_characteristic(lam):
    sol = solve_he11(lam, FIBER)
    assert sol.beta == pytest.approx(_independent_root(lam, FIBER), rel=1e-9)


def test_solution_invariants(sol937):
    s = sol937
    k0 = s.k0
    assert k0 * s.n2 < s.beta < k0 * s.n1
    assert s.h ** 2 == pytest.approx(k0 ** 2 * s.n1 ** 2 - s.beta ** 2, rel=1e-12)
    assert s.q ** 2 == pytest.approx(s.beta ** 2 - k0 ** 2 * s.n2 ** 2, rel=1e-12)
    assert s.s == pytest.approx(s_parameter(s.h, s.q, s.a), rel=1e-12)


def test_s_is_ratio_form(sol937):
    s = sol937
    u, w = s.h * s.a, s.q * s.a
    ratio = (1 / u ** 2 + 1 / w ** 2) / (jvp(1, u) / (u * jv(1, u)) + kvp(1, w) / (w * kv(1, w)))
    assert s.s == pytest.approx(ratio, rel=1e-12)
    assert -1 < s.s < 0


def test_dispersion_residual_small(sol937):
    s = sol937
    d = 1e-3 * s.beta
    scale = max(abs(characteristic(s.beta - d, s.wavelength, FIBER)),
                abs(characteristic(s.beta + d, s.wavelength, FIBER)))
    assert abs(characteristic(s.beta, s.wavelength, FIBER)) < 1e-10 * scale


def test_weak_guidance_limit():
    lam = 937e-9
    neff = [solve_he11(lam, FiberSpec(a)).effective_index for a in (250e-9, 150e-9, 100e-9, 50e-9)]
    assert all(x >= y for x, y in zip(neff, neff[1:]))
    assert neff[-1] - 1.0 < 1e-3


def test_no_index_contrast():
    with pytest.raises(NoGuidedRoot):
        solve_he11(937e-9, FiberSpec(250e-9, n1=1.2, n2=1.2))


# -- normalization

def test_zero_power_amplitude(sol937):
    assert normalize_amplitude(sol937, 0.0) == 0.0


@given(st.floats(1e-6, 1.0))
@settings(max_examples=25, deadline=None)
def test_amplitude_quadratic_in_power(p):
    sol = solve_he11(937e-9, FIBER)
    assert normalize_amplitude(sol, 2 * p) == pytest.approx(np.sqrt(2) * normalize_amplitude(sol, p),
                                                            rel=1e-12)


def _power_independent(sol, amplitude):
    """Poynting flux of the linear mode by Richardson-extrapolated trapezoid.

    Uses only the E components; H is rebuilt here from Faraday's law with
    numerical radial derivatives, and the linear mode is the half-amplitude
    sum of the two circular modes, so P_lin = |A|^2 P_circ / 2.
    """
    omega_mu = 2 * np.pi * C.c / sol.wavelength * C.mu0
    b = sol.beta

    def sz(r):
        Er, Ephi, Ez, _, _ = _circular_mode(sol, r)
        # one-sided differences that never straddle the core boundary
        dr = np.where(r < sol.a, -1e-6, 1e-6) * sol.a
        Ez1 = _circular_mode(sol, r + dr)[2]
        Ez2 = _circular_mode(sol, r + 2 * dr)[2]
        dEz = (-3 * Ez + 4 * Ez1 - Ez2) / (2 * dr)
        Hr = (Ez / r - b * Ephi) / omega_mu
        Hphi = (b * Er + 1j * dEz) / omega_mu
        return 0.5 * np.real(Er * np.conj(Hphi) - Ephi * np.conj(Hr))

    def trap(lo, hi, n):
        r = np.linspace(lo, hi, n + 1)
        return np.trapezoid(2 * np.pi * r * sz(r), r)

    def rich(lo, hi):
        n = 4000
        t1, t2 = trap(lo, hi, n), trap(lo, hi, 2 * n)
        return t2 + (t2 - t1) / 3

    a = sol.a
    total = rich(a * 1e-3, a * (1 - 1e-12)) + rich(a, a + 40 / sol.q)
    return amplitude ** 2 * total / 2


@pytest.mark.parametrize("lam", [937e-9, 1064e-9])
def test_power_normalization_independent(lam):
    sol = solve_he11(lam, FIBER)
    P = 25e-3
    assert _power_independent(sol, normalize_amplitude(sol, P)) == pytest.approx(P, rel=1e-5)


def test_peak_intensity_regression(sol1064):
    A = normalize_amplitude(sol1064, 25e-3)
    E = mode_field_array(sol1064, A, "forward", 0.0, sol1064.a, 0.0, 0.0)
    intensity = 0.5 * C.c * C.eps0 * np.sum(np.abs(E) ** 2)
    assert A == pytest.approx(6256546.216532521, rel=1e-8)
    assert intensity == pytest.approx(85764529592.98108, rel=1e-8)


# -- exterior field

@pytest.mark.parametrize("a", [100e-9, 250e-9, 400e-9])
def test_boundary_continuity(a):
    sol = solve_he11(937e-9, FiberSpec(a))
    eps = 1e-12 * a
    inn = _circular_mode(sol, np.array([a - eps]))
    out = _circular_mode(sol, np.array([a + eps]))
    # E_phi and E_z tangential, n^2 E_r normal
    assert out[1][0] == pytest.approx(inn[1][0], rel=1e-8)
    assert out[2][0] == pytest.approx(inn[2][0], rel=1e-8)
    assert sol.n2 ** 2 * out[0][0] == pytest.approx(sol.n1 ** 2 * inn[0][0], rel=1e-8)


def test_longitudinal_fraction(sol937):
    E = mode_field_array(sol937, 1.0, "forward", 0.0, sol937.a, 0.0, 0.0)
    frac = abs(E[2]) ** 2 / np.sum(np.abs(E) ** 2)
    assert frac == pytest.approx(0.219945, abs=1e-5)


@pytest.mark.parametrize("pol", [0.0, 0.4, np.pi / 3])
def test_ez_zero_perpendicular(sol937, pol):
    for phi in (pol + np.pi / 2, pol - np.pi / 2):
        E = mode_field_array(sol937, 1.0, "forward", pol, 300e-9, phi, 17e-9)
        assert abs(E[2]) < 1e-15 * np.max(np.abs(E))


def test_exterior_k_scaling(sol937):
    s = sol937
    r = np.array([300e-9, 600e-9])
    E = mode_field_array(s, 1.0, "forward", 0.0, r, 0.3, 0.0)
    norm = jv(1, s.h * s.a) / kv(1, s.q * s.a)
    Cz = norm * kv(1, s.q * r) * np.cos(0.3)
    assert np.allclose(E[:, 2], 1j * Cz, rtol=1e-12, atol=0)


@given(st.floats(0.0, np.pi), st.floats(1.0, 3.0))
@settings(max_examples=40, deadline=None)
def test_intensity_mirror_symmetry(phi, rr):
    s = solve_he11(937e-9, FIBER)
    r = rr * s.a
    I = lambda p: np.sum(np.abs(mode_field_array(s, 1.0, "forward", 0.0, r, p, 0.0)) ** 2)
    ref = I(phi)
    assert I(-phi) == pytest.approx(ref, rel=1e-12)
    assert I(np.pi - phi) == pytest.approx(ref, rel=1e-12)


def test_intensity_extrema_on_surface(sol937):
    phi = np.linspace(-np.pi, np.pi, 721)
    I = np.sum(np.abs(mode_field_array(sol937, 1.0, "forward", 0.0, sol937.a, phi, 0.0)) ** 2,
               axis=-1)
    assert np.isclose(phi[np.argmax(I)] % np.pi, 0.0, atol=1e-9) or np.isclose(
        phi[np.argmax(I)] % np.pi, np.pi, atol=1e-9)
    assert np.isclose(abs(phi[np.argmin(I)]), np.pi / 2, atol=1e-9)


def test_inside_fiber_raises(sol937):
    with pytest.raises(InsideFiber):
        mode_field_array(sol937, 1.0, "forward", 0.0, 0.9 * sol937.a, 0.0, 0.0)


def test_forward_backward_relation(sol937):
    s = sol937
    fw = mode_field_array(s, 1.0, "forward", 0.0, 320e-9, 0.4, 0.0)
    bw = mode_field_array(s, 1.0, "backward", 0.0, 320e-9, 0.4, 0.0)
    assert np.allclose(fw[:2], bw[:2], rtol=1e-14, atol=0)
    assert bw[2] == pytest.approx(-fw[2], rel=1e-14)


def test_single_beam_group_equals_mode_field(sol937):
    beam = BeamSpec(937e-9, 1e-3, "forward", 0.2)
    pt = (330e-9, 0.7, 40e-9)
    assert np.allclose(superpose_group([beam], pt, FIBER).E_plus,
                       mode_field(sol937, beam, pt).E_plus, rtol=1e-14, atol=0)


def test_mixed_wavelength_group():
    with pytest.raises(MixedWavelengthGroup):
        superpose_group([BeamSpec(937e-9, 1e-3), BeamSpec(938e-9, 1e-3, "backward")],
                        (300e-9, 0.0, 0.0), FIBER)


def test_standing_wave_form(sol937):
    s = sol937
    P = 1e-3
    beams = [BeamSpec(937e-9, P, "forward"), BeamSpec(937e-9, P, "backward")]
    A = normalize_amplitude(s, P)
    for z in np.linspace(0, np.pi / s.beta, 7):
        tot = superpose_group(beams, (300e-9, 0.5, z), FIBER).E_plus
        one = mode_field_array(s, A, "forward", 0.0, 300e-9, 0.5, 0.0)
        ref = 2 * np.array([one[0].real * np.cos(s.beta * z), one[1].real * np.cos(s.beta * z),
                            one[2].imag * np.sin(s.beta * z)])
        assert np.allclose(tot, ref, rtol=0, atol=1e-12 * np.max(np.abs(one)))


def test_standing_wave_rotates_x_to_z(sol937):
    s = sol937
    beams = [BeamSpec(937e-9, 1e-3, "forward"), BeamSpec(937e-9, 1e-3, "backward")]
    E0 = superpose_group(beams, (s.a, 0.0, 0.0), FIBER).E_plus
    E1 = superpose_group(beams, (s.a, 0.0, np.pi / (2 * s.beta)), FIBER).E_plus
    assert abs(E0[1]) < 1e-12 * abs(E0[0]) and abs(E0[2]) < 1e-12 * abs(E0[0])
    assert abs(E1[0]) < 1e-12 * abs(E1[2]) and abs(E1[1]) < 1e-12 * abs(E1[2])
