"""Physical constants and unit conversions (CODATA values via scipy)."""
from scipy import constants as csts

h = csts.h
hbar = csts.hbar
kB = csts.k
c = csts.c
eps0 = csts.epsilon_0
mu0 = csts.mu_0

# atomic units
a0 = csts.physical_constants["Bohr radius"][0]
E_h = csts.physical_constants["Hartree energy"][0]
e = csts.e
#: 1 a.u. of polarizability in C m^2 / V
AU_POLARIZABILITY = csts.physical_constants["atomic unit of electric polarizability"][0]

#: atomic mass unit
amu = csts.physical_constants["atomic mass constant"][0]


def hz_to_au(f_hz):
    """Convert a frequency (Hz) to an energy in Hartree."""
    return f_hz * h / E_h


def au_to_hz(energy_au):
    return energy_au * E_h / h


def hz_to_mk(f_hz):
    """Energy h*f expressed as a temperature in mK."""
    return f_hz * h / kB * 1e3


def wavelength_to_hz(lam):
    return c / lam


def intensity_to_field2(intensity):
    """|E|^2 (V^2/m^2) of the complex amplitude for a given intensity in vacuum."""
    return 2.0 * intensity / (c * eps0)
