import numpy as np
import pytest

from nanotrap import constants as C
from nanotrap.atomic import default_database
from nanotrap.errors import NoSignChange, OnResonance
from nanotrap.lightshift import stark_matrix
from nanotrap.polarizability import (differential_shift, find_magic_wavelength,
                                     fine_structure_scalar, linear_sublevel_shift,
                                     polarizabilities)
from oracle import oracle_stark_hz

DB = default_database()
FIELD_AU = C.E_h / (C.e * C.a0)
STATIC = 2 * np.pi * 1e-3


def _oracle(label, F, omega, E):
    return oracle_stark_hz(DB, label, F, omega, E, C.hz_to_au, C.au_to_hz, FIELD_AU)


# values frozen from the brute-force oracle (tests/oracle.py) on the bundled data
@pytest.mark.parametrize("label,F,a0,a2", [
    ("6S1/2", 4.0, 385.11138192035673, 0.0),
    ("6S1/2", 3.0, 385.10124967097727, 0.0),
    ("6P3/2", 5.0, 1691.1001484333704, -268.2641347089095),
    ("6P3/2", 4.0, 1691.0960400545507, 107.30189354673888),
    ("6P1/2", 4.0, 1438.1728705807275, 0.0),
])
def test_static_frozen(label, F, a0, a2):
    p = polarizabilities(label, F, STATIC)
    assert p.alpha0 == pytest.approx(a0, rel=1e-10)
    assert p.alpha2 == pytest.approx(a2, rel=1e-10, abs=1e-12)
    assert abs(p.alpha1) < 1e-9 * a0


@pytest.mark.parametrize("label,F", [("6S1/2", 4.0), ("6S1/2", 3.0), ("6P3/2", 5.0),
                                     ("6P3/2", 2.0), ("6P1/2", 3.0)])
@pytest.mark.parametrize("lam", [685e-9, 937e-9, 1064e-9])
def test_against_oracle(label, F, lam):
    rng = np.random.default_rng(int(F * 10 + lam * 1e9))
    E = (rng.normal(size=3) + 1j * rng.normal(size=3)) * 1e6
    omega = 2 * np.pi * C.c / lam
    H = stark_matrix(E, polarizabilities(label, F, omega, exact_tensor=True), F)
    Ho = _oracle(label, F, omega, E)
    assert np.max(np.abs(H - Ho)) < 1e-9 * np.max(np.abs(Ho))


def test_oracle_static_value():
    # scalar shift of |6S, F=4> in a static z field from the oracle alone;
    # the trace removes the small hyperfine-induced tensor part
    E = np.array([0, 0, 1e6])
    Ho = _oracle("6S1/2", 4.0, STATIC, E)
    alpha_au = -4 * np.trace(Ho).real / 9 * C.h / (1e12 * C.AU_POLARIZABILITY)
    assert alpha_au == pytest.approx(385.11138192035673, rel=1e-9)


def test_hyperfine_scalar_close_to_fine_structure():
    fs = fine_structure_scalar("6S1/2", STATIC)
    for F in (3.0, 4.0):
        assert polarizabilities("6S1/2", F, STATIC).alpha0 == pytest.approx(fs, rel=1e-4)


def test_j_half_tensor_zero_by_default():
    omega = 2 * np.pi * C.c / 937e-9
    for label in ("6S1/2", "6P1/2"):
        for F in (3.0, 4.0):
            assert polarizabilities(label, F, omega).alpha2 == 0.0
    exact = polarizabilities("6S1/2", 4.0, omega, exact_tensor=True)
    assert 0 < abs(exact.alpha2) < 1e-3 * abs(exact.alpha0)


def test_vector_antisymmetric_in_frequency_sign():
    # alpha1 flips sign with omega, alpha0 and alpha2 do not
    w = 2 * np.pi * C.c / 937e-9
    p, m = polarizabilities("6P3/2", 4.0, w), polarizabilities("6P3/2", 4.0, -w)
    assert m.alpha1 == pytest.approx(-p.alpha1, rel=1e-12)
    assert m.alpha0 == pytest.approx(p.alpha0, rel=1e-12)
    assert m.alpha2 == pytest.approx(p.alpha2, rel=1e-12)


def test_on_resonance():
    g, e = DB.level("6S1/2"), DB.level("6P3/2")
    f = e.hyperfine_energy(5) - g.hyperfine_energy(4)
    with pytest.raises(OnResonance):
        polarizabilities("6S1/2", 4.0, 2 * np.pi * (f + 1e8))


def test_linear_sublevel_shift_matches_matrix():
    omega = 2 * np.pi * C.c / 937e-9
    p = polarizabilities("6P3/2", 4.0, omega)
    I = 2.9e9
    E = np.array([0, 0, np.sqrt(C.intensity_to_field2(I))])
    H = stark_matrix(E, p, 4.0)
    for k, m in enumerate(np.arange(-4, 5)):
        assert H[k, k].real == pytest.approx(linear_sublevel_shift(p, m, I), rel=1e-12)


def test_magic_wavelengths_frozen():
    red = find_magic_wavelength((934e-9, 940e-9))
    blue = find_magic_wavelength((684e-9, 690e-9))
    assert red.wavelength == pytest.approx(9.357600868704101e-07, rel=1e-9)
    assert blue.wavelength == pytest.approx(6.850015026665593e-07, rel=1e-9)
    assert abs(differential_shift(red.wavelength)) < 1e-6 * abs(red.shift)
    assert red.shift < 0 < blue.shift


def test_magic_no_sign_change():
    with pytest.raises(NoSignChange):
        find_magic_wavelength((1000e-9, 1010e-9))
