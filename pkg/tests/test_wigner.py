import itertools

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational
from sympy.physics.wigner import clebsch_gordan as sym_cg
from sympy.physics.wigner import wigner_3j as sym_3j
from sympy.physics.wigner import wigner_6j as sym_6j

from nanotrap.wigner import clebsch_gordan, wigner_3j, wigner_6j

half = st.integers(0, 9).map(lambda k: k / 2)


def R(x):
    return Rational(int(round(2 * x)), 2)


@given(half, half, half, half, half, half)
@settings(max_examples=300, deadline=None)
def test_6j_matches_sympy(a, b, c, d, e, f):
    try:
        want = float(sym_6j(R(a), R(b), R(c), R(d), R(e), R(f)))
    except ValueError:  # sympy refuses triads with half-integer sums
        want = 0.0
    assert wigner_6j(a, b, c, d, e, f) == pytest.approx(want, abs=1e-14)


@given(half, half, half, st.integers(-9, 9), st.integers(-9, 9))
@settings(max_examples=300, deadline=None)
def test_3j_matches_sympy(j1, j2, j3, k1, k2):
    m1 = j1 - abs(k1) % (int(2 * j1) + 1) if j1 else 0.0
    m2 = j2 - abs(k2) % (int(2 * j2) + 1) if j2 else 0.0
    m3 = -m1 - m2
    want = float(sym_3j(R(j1), R(j2), R(j3), R(m1), R(m2), R(m3))) if abs(m3) <= j3 and \
        (j3 - m3) == int(j3 - m3) else 0.0
    assert wigner_3j(j1, j2, j3, m1, m2, m3) == pytest.approx(want, abs=1e-14)


def test_clebsch_gordan_cs_ground():
    for m1, m2 in itertools.product((-0.5, 0.5), [k - 3.5 for k in range(8)]):
        for F in (3, 4):
            M = m1 + m2
            if abs(M) > F:
                continue
            want = float(sym_cg(R(0.5), R(3.5), R(F), R(m1), R(m2), R(M)))
            assert clebsch_gordan(0.5, m1, 3.5, m2, F, M) == pytest.approx(want, abs=1e-14)


def test_6j_orthogonality():
    j1, j2, j3, j4 = 1, 2, 1, 2
    for j6 in (1, 2):
        for j6p in (1, 2):
            tot = sum((2 * j5 + 1) * (2 * j6 + 1)
                      * wigner_6j(j1, j2, j5, j3, j4, j6) * wigner_6j(j1, j2, j5, j3, j4, j6p)
                      for j5 in [k / 2 for k in range(0, 20)])
            assert tot == pytest.approx(1.0 if j6 == j6p else 0.0, abs=1e-13)
