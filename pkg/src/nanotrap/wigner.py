"""Wigner 3-j and 6-j symbols by the Racah formulas in exact arithmetic.

Arguments may be integers, half-integers given as floats, or Fractions.
Each symbol is evaluated as sign * sqrt(rational) * integer-sum with
Python integers, so the only rounding happens in the final float.
"""
from fractions import Fraction
from functools import lru_cache
from math import factorial, isqrt


def _twice(j):
    t = Fraction(j) * 2
    if t.denominator != 1:
        raise ValueError(f"{j} is not an integer or half-integer")
    return int(t)


def _sqrt_fraction(fr: Fraction) -> float:
    # sqrt(p/q) computed from the exact integers to keep full double precision
    p, q = fr.numerator, fr.denominator
    shift = 120
    return isqrt((p << (2 * shift)) // q) / float(1 << shift)


def _triangle(a2, b2, c2):
    """Delta(abc)^2 as a Fraction, or None if the triad is not allowed."""
    if (a2 + b2 + c2) % 2 or a2 + b2 < c2 or a2 + c2 < b2 or b2 + c2 < a2:
        return None
    return Fraction(factorial((a2 + b2 - c2) // 2) * factorial((a2 - b2 + c2) // 2)
                    * factorial((-a2 + b2 + c2) // 2), factorial((a2 + b2 + c2) // 2 + 1))


def wigner_3j(j1, j2, j3, m1, m2, m3) -> float:
    return _w3j(_twice(j1), _twice(j2), _twice(j3), _twice(m1), _twice(m2), _twice(m3))


@lru_cache(maxsize=None)
def _w3j(j1, j2, j3, m1, m2, m3):
    if m1 + m2 + m3 != 0:
        return 0.0
    if any(abs(m) > j for m, j in ((m1, j1), (m2, j2), (m3, j3))):
        return 0.0
    if any((j - m) % 2 for m, j in ((m1, j1), (m2, j2), (m3, j3))):
        return 0.0
    tri = _triangle(j1, j2, j3)
    if tri is None:
        return 0.0
    pre = tri
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        pre *= factorial((j + m) // 2) * factorial((j - m) // 2)
    # summation bounds (all in doubled units)
    kmin = max(0, (j2 - j3 - m1) // 2, (j1 - j3 + m2) // 2)
    kmax = min((j1 + j2 - j3) // 2, (j1 - m1) // 2, (j2 + m2) // 2)
    total = 0
    for k in range(kmin, kmax + 1):
        den = (factorial(k) * factorial((j1 + j2 - j3) // 2 - k) * factorial((j1 - m1) // 2 - k)
               * factorial((j2 + m2) // 2 - k) * factorial((j3 - j2 + m1) // 2 + k)
               * factorial((j3 - j1 - m2) // 2 + k))
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 0.0
    sign = -1 if ((j1 - j2 - m3) // 2) % 2 else 1
    # combine sqrt(pre) * total = sign(total) * sqrt(pre * total^2)
    sgn = 1 if total > 0 else -1
    return sign * sgn * _sqrt_fraction(pre * total * total)


def wigner_6j(j1, j2, j3, j4, j5, j6) -> float:
    """{j1 j2 j3; j4 j5 j6}."""
    return _w6j(*(_twice(j) for j in (j1, j2, j3, j4, j5, j6)))


@lru_cache(maxsize=None)
def _w6j(a, b, c, d, e, f):
    triads = ((a, b, c), (a, e, f), (d, b, f), (d, e, c))
    deltas = [_triangle(*t) for t in triads]
    if any(t is None for t in deltas):
        return 0.0
    pre = deltas[0] * deltas[1] * deltas[2] * deltas[3]
    sums = [sum(t) // 2 for t in triads]
    tops = [(a + b + d + e) // 2, (a + c + d + f) // 2, (b + c + e + f) // 2]
    total = 0
    for t in range(max(sums), min(tops) + 1):
        den = factorial(t - sums[0]) * factorial(t - sums[1]) * factorial(t - sums[2]) \
            * factorial(t - sums[3])
        for top in tops:
            den *= factorial(top - t)
        total += Fraction((-1) ** t * factorial(t + 1), den)
    if total == 0:
        return 0.0
    sgn = 1 if total > 0 else -1
    return sgn * _sqrt_fraction(pre * total * total)


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """<j1 m1 j2 m2 | J M> (Condon-Shortley)."""
    phase = -1 if (_twice(j1) - _twice(j2) + _twice(M)) // 2 % 2 else 1
    return phase * (_twice(J) + 1) ** 0.5 * wigner_3j(j1, j2, J, m1, m2, -M)
