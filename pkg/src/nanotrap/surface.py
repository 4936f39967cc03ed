"""Planar van der Waals atom-surface attraction, U = -C3 / d^3."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import constants as C
from .errors import ConfigError, NonPositiveDistance

C3_OVER_H_KHZ_UM3 = 1.2
EXCITED_SCALE = 2.0


@dataclass(frozen=True)
class SurfaceModel:
    """C3 in J m^3; ``excited_scale`` multiplies it for 6P3/2."""
    C3: float = C3_OVER_H_KHZ_UM3 * 1e3 * C.h * 1e-18
    excited_scale: float = EXCITED_SCALE

    def __post_init__(self):
        if not self.C3 > 0:
            raise ConfigError("C3 must be positive")
        if not self.excited_scale > 0:
            raise ConfigError("excited_scale must be positive")

    @classmethod
    def from_khz_um3(cls, c3_over_h: float, excited_scale: float = EXCITED_SCALE):
        return cls(c3_over_h * 1e3 * C.h * 1e-18, excited_scale)

    @property
    def c3_over_h_khz_um3(self) -> float:
        return self.C3 / C.h / 1e3 * 1e18

    def scale_for(self, level: str) -> float:
        return self.excited_scale if level.startswith("6P3/2") else 1.0


def surface_potential(d, manifold, model: SurfaceModel = SurfaceModel()):
    """-C3/d^3 in Hz for distance d (m) from the surface; same for every sublevel.

    ``manifold`` is a Manifold or a level label.
    """
    level = manifold if isinstance(manifold, str) else manifold.level
    d = np.asarray(d, float)
    if np.any(~(d > 0)):
        raise NonPositiveDistance("distance to the surface must be positive")
    U = -model.C3 * model.scale_for(level) / d ** 3 / C.h
    return float(U) if U.ndim == 0 else U
