"""
Radial R^m-valued profiles sampled with derivative data.

A profile stores values and first derivatives at strictly increasing radii and
interpolates between nodes with cubic Hermite polynomials. A profile flagged
regular-at-origin may start at r = 0, where its derivative vanishes.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from src.core.errors import DomainError


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """
    Attributes:
        grid: Radii r_0 < ... < r_{n-1}, shape (n,)
        values: u(r_i), shape (n, m)
        derivs: u'(r_i), shape (n, m)
        regular_at_origin: Whether r_0 = 0 is allowed
    """

    grid: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    regular_at_origin: bool = False
    _spline: Optional[CubicHermiteSpline] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=float)
        derivs = np.array(self.derivs, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if derivs.ndim == 1:
            derivs = derivs[:, None]

        if grid.ndim != 1 or grid.size < 2:
            raise ValueError(f"Profile grid must be one-dimensional with at least two nodes, got shape {grid.shape}")
        if values.shape != derivs.shape or values.shape[0] != grid.size:
            raise ValueError(f"Values {values.shape} and derivs {derivs.shape} do not match grid of size {grid.size}")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError("Profile grid must be strictly increasing")
        if grid[0] < 0.0 or (grid[0] == 0.0 and not self.regular_at_origin):
            raise ValueError(f"Grid starts at r = {grid[0]}, only regular-at-origin profiles may start at 0")
        if grid[0] == 0.0:
            derivs = derivs.copy()
            derivs[0] = 0.0

        for name, array in (("grid", grid), ("values", values), ("derivs", derivs)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        object.__setattr__(self, "_spline", CubicHermiteSpline(grid, values, derivs, axis=0))

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def n(self) -> int:
        return self.grid.size

    @property
    def r_min(self) -> float:
        return float(self.grid[0])

    @property
    def r_max(self) -> float:
        return float(self.grid[-1])

    def evaluate(self, r, nu: int = 0) -> np.ndarray:
        """
        Evaluate the Hermite interpolant (nu = 0), or its nu-th derivative.

        Args:
            r: Radius or array of radii inside [r_0, r_{n-1}]
            nu: Derivative order

        Returns:
            Array of shape r.shape + (m,)

        Raises:
            DomainError: If any radius lies outside the grid
        """
        r = np.asarray(r, dtype=float)
        span = 1e-12 * max(1.0, abs(self.r_max))
        if np.any(r < self.r_min - span) or np.any(r > self.r_max + span):
            raise DomainError(f"Radius outside profile domain [{self.r_min}, {self.r_max}]")
        return self._spline(np.clip(r, self.r_min, self.r_max), nu)

    def derivative(self, r) -> np.ndarray:
        return self.evaluate(r, nu=1)

    def asymptotic_charge(self) -> np.ndarray:
        """theta estimated as r u(r) at the last node, for profiles decaying like theta / r."""
        return self.r_max * self.values[-1]

    def evaluate_extended(self, r) -> np.ndarray:
        """Evaluate, continuing past the last node with the theta / r tail."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        inside = np.minimum(r, self.r_max)
        out = self.evaluate(inside)
        beyond = r > self.r_max
        if np.any(beyond):
            out[beyond] = self.asymptotic_charge() / r[beyond][:, None]
        return out

    def derivative_extended(self, r) -> np.ndarray:
        r = np.atleast_1d(np.asarray(r, dtype=float))
        inside = np.minimum(r, self.r_max)
        out = self.derivative(inside)
        beyond = r > self.r_max
        if np.any(beyond):
            out[beyond] = -self.asymptotic_charge() / (r[beyond] ** 2)[:, None]
        return out

    def rescaled(self, lam: float) -> "RadialProfile":
        """Critical rescaling lambda^{-1/2} p(r / lambda)."""
        if lam <= 0.0:
            raise ValueError(f"Scale must be positive, got {lam}")
        return RadialProfile(
            grid=lam * self.grid,
            values=lam ** -0.5 * self.values,
            derivs=lam ** -1.5 * self.derivs,
            regular_at_origin=self.regular_at_origin,
        )

    def times(self, factor) -> "RadialProfile":
        """Multiply the values componentwise (a scalar or a vector in R^m)."""
        factor = np.asarray(factor, dtype=float)
        return RadialProfile(self.grid, self.values * factor, self.derivs * factor, self.regular_at_origin)

    def embed(self, direction) -> "RadialProfile":
        """Turn a scalar profile p into the R^m profile p * direction."""
        if self.m != 1:
            raise ValueError(f"Only scalar profiles can be embedded, this one has m = {self.m}")
        direction = np.asarray(direction, dtype=float).reshape(1, -1)
        return RadialProfile(self.grid, self.values * direction, self.derivs * direction, self.regular_at_origin)

    def restrict(self, r_lo: float, r_hi: float) -> "RadialProfile":
        """Nodes of the profile lying in [r_lo, r_hi]."""
        mask = (self.grid >= r_lo) & (self.grid <= r_hi)
        if np.count_nonzero(mask) < 2:
            raise DomainError(f"Fewer than two nodes in [{r_lo}, {r_hi}]")
        return RadialProfile(self.grid[mask], self.values[mask], self.derivs[mask], self.regular_at_origin)
