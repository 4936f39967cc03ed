"""Optical trapping potentials for Cs atoms around a nanofiber."""
__version__ = "0.1.0"

from .atomic import AtomDatabase, default_database, load_atom_data
from .lightshift import Manifold, stark_hamiltonian, total_stark_hamiltonian, ellipticity_vector
from .polarizability import PolarizabilitySet, find_magic_wavelength, polarizabilities
from .surface import SurfaceModel, surface_potential
from .trap import (TrapConfiguration, adiabatic_levels, characterize, find_trap_minimum,
                   motional_width, scan_potential, splitting_map, trap_frequencies)
from .waveguide import BeamSpec, FiberSpec, mode_field, solve_he11, superpose_group
