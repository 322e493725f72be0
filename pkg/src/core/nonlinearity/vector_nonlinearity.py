"""
Vector nonlinearities f: R^m -> R^m, homogeneous of degree 5, with an optional potential F.

All callables are vectorized over leading axes: an array of shape (..., m) maps
to (..., m) for the field and to (...) for the potential.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from src.core.errors import MissingPotential

FieldMap = Callable[[np.ndarray], np.ndarray]
PotentialMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class VectorNonlinearity:
    """
    An evaluatable degree-5 map together with its potential when one exists.

    Attributes:
        name: Registry identifier (or custom name from a scenario file)
        m: Number of components
        field_map: Vectorized map u -> f(u)
        potential_map: Vectorized map u -> F(u), or None for non-gradient fields
    """

    name: str
    m: int
    field_map: FieldMap = field(repr=False)
    potential_map: Optional[PotentialMap] = field(default=None, repr=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"Number of components must be positive, got {self.m}")

    @property
    def has_potential(self) -> bool:
        return self.potential_map is not None

    def eval(self, u) -> np.ndarray:
        """Evaluate f on an array whose last axis has length m."""
        u = self._as_components(u)
        return np.asarray(self.field_map(u), dtype=float)

    def energy_density(self, u) -> np.ndarray:
        """
        Evaluate the potential F.

        Raises:
            MissingPotential: If the nonlinearity has no potential
        """
        if self.potential_map is None:
            raise MissingPotential(f"Nonlinearity '{self.name}' has no potential F")
        u = self._as_components(u)
        return np.asarray(self.potential_map(u), dtype=float)

    def scaled(self, factor: float) -> "VectorNonlinearity":
        """Return c*f (and c*F), keeping homogeneity."""
        base_field, base_potential = self.field_map, self.potential_map
        potential = None
        if base_potential is not None:
            def potential(u):
                return factor * base_potential(u)
        return VectorNonlinearity(
            name=f"{factor:g}*{self.name}",
            m=self.m,
            field_map=lambda u: factor * base_field(u),
            potential_map=potential,
        )

    def _as_components(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.ndim == 0 and self.m == 1:
            u = u.reshape(1)
        if u.shape[-1] != self.m:
            raise ValueError(f"Expected last axis of length {self.m} for '{self.name}', got shape {u.shape}")
        return u
