import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nanotrap.errors import ConfigError, NonPositiveDistance
from nanotrap.surface import SurfaceModel, surface_potential
from nanotrap.trap import EXCITED_F4, GROUND_F4


def test_ground_value_at_100nm():
    assert surface_potential(0.1e-6, GROUND_F4) == pytest.approx(-1.2e6, rel=1e-12)


def test_excited_twice_ground():
    d = 180e-9
    assert surface_potential(d, EXCITED_F4) == pytest.approx(2 * surface_potential(d, GROUND_F4),
                                                             rel=1e-14)
    assert surface_potential(d, "6S1/2") == surface_potential(d, GROUND_F4)


@given(st.floats(20e-9, 5e-6))
@settings(max_examples=50)
def test_inverse_cube(d):
    assert surface_potential(2 * d, GROUND_F4) == pytest.approx(
        surface_potential(d, GROUND_F4) / 8, rel=1e-13)


def test_monotone_attractive():
    U = surface_potential(np.linspace(20e-9, 1e-6, 200), GROUND_F4)
    assert np.all(U < 0) and np.all(np.diff(U) > 0)


def test_bad_inputs():
    with pytest.raises(NonPositiveDistance):
        surface_potential(0.0, GROUND_F4)
    with pytest.raises(NonPositiveDistance):
        surface_potential(np.array([1e-7, -1e-9]), GROUND_F4)
    with pytest.raises(ConfigError):
        SurfaceModel.from_khz_um3(-1.0)


def test_model_round_trip():
    m = SurfaceModel.from_khz_um3(2.5, 3.0)
    assert m.c3_over_h_khz_um3 == pytest.approx(2.5, rel=1e-14)
    assert surface_potential(0.1e-6, EXCITED_F4, m) == pytest.approx(-7.5e6, rel=1e-12)
