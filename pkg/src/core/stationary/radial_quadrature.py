"""
Radial quadrature on profiles: composite Gauss-Legendre over grid intervals applied
to the Hermite interpolant, plus analytic tails from the theta / r asymptote.

The 4*pi factor of the volume element is dropped throughout, so every integral is
taken against r^2 dr.
"""

from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.stationary.radial_profile import RadialProfile

GAUSS_ORDER = 5
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)

Density = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _interval_points(a: np.ndarray, b: np.ndarray):
    half = 0.5 * (b - a)
    points = 0.5 * (a + b)[:, None] + half[:, None] * _NODES[None, :]
    weights = half[:, None] * _WEIGHTS[None, :]
    return points, weights


def interval_integrals(profile: RadialProfile, density: Density) -> np.ndarray:
    """
    Integral of density(r, u, u') r^2 over each grid interval.

    Args:
        profile: Profile to integrate
        density: Vectorized function of (r, u, du) returning one value per point

    Returns:
        Array of shape (n - 1,)
    """
    points, weights = _interval_points(profile.grid[:-1], profile.grid[1:])
    values = profile.evaluate(points)
    derivs = profile.derivative(points)
    return np.sum(density(points, values, derivs) * points ** 2 * weights, axis=1)


def partial_integral(profile: RadialProfile, density: Density, r_hi: float) -> float:
    """Integral of density r^2 over [r_0, r_hi]."""
    r_hi = min(max(r_hi, profile.r_min), profile.r_max)
    k = int(np.searchsorted(profile.grid, r_hi, side="right")) - 1
    full = float(np.sum(interval_integrals(profile, density)[:k])) if k > 0 else 0.0
    if r_hi <= profile.grid[k]:
        return full
    points, weights = _interval_points(np.array([profile.grid[k]]), np.array([r_hi]))
    part = density(points, profile.evaluate(points), profile.derivative(points)) * points ** 2 * weights
    return full + float(np.sum(part))


def _gradient_density(r, u, du):
    return np.sum(du * du, axis=-1)


def _sextic_density(r, u, du):
    return np.sum(u * u, axis=-1) ** 3


def gradient_energy(profile: RadialProfile, with_tail: bool = True) -> float:
    """int |p'|^2 r^2 dr over the grid, plus |theta|^2 / r_max beyond it."""
    total = float(np.sum(interval_integrals(profile, _gradient_density)))
    if with_tail:
        theta = profile.asymptotic_charge()
        total += float(theta @ theta) / profile.r_max
    return total


def cumulative_gradient_energy(profile: RadialProfile, radius: float) -> float:
    return partial_integral(profile, _gradient_density, radius)


def potential_integral(nl: VectorNonlinearity, profile: RadialProfile, with_tail: bool = True) -> float:
    """int F(p) r^2 dr, with tail F(theta) / (3 r_max^3)."""
    def density(r, u, du):
        return nl.energy_density(u)

    total = float(np.sum(interval_integrals(profile, density)))
    if with_tail:
        theta = profile.asymptotic_charge()
        total += float(nl.energy_density(theta)) / (3.0 * profile.r_max ** 3)
    return total


def sextic_mass(profile: RadialProfile, with_tail: bool = True) -> float:
    """int |p|^6 r^2 dr, the discrete L^6 mass."""
    total = float(np.sum(interval_integrals(profile, _sextic_density)))
    if with_tail:
        theta = profile.asymptotic_charge()
        total += float(theta @ theta) ** 3 / (3.0 * profile.r_max ** 3)
    return total


def stationary_energy(nl: VectorNonlinearity, profile: RadialProfile, with_tail: bool = True) -> float:
    """E(p) = 1/2 int |p'|^2 - int F(p) for a time-independent profile."""
    return 0.5 * gradient_energy(profile, with_tail) - potential_integral(nl, profile, with_tail)


def half_energy_radius(profile: RadialProfile, fraction: float = 0.5,
                       total: Optional[float] = None) -> float:
    """
    Radius holding the given fraction of the gradient energy (tail included in the total).

    The cumulative energy is monotone, so the radius is found by bracketing the
    node intervals and solving inside the last one.
    """
    if total is None:
        total = gradient_energy(profile)
    target = fraction * total
    per_interval = interval_integrals(profile, _gradient_density)
    cumulative = np.concatenate([[0.0], np.cumsum(per_interval)])
    if cumulative[-1] < target:
        # Beyond the grid the energy follows the |theta|^2 / r tail.
        theta = profile.asymptotic_charge()
        missing = target - cumulative[-1]
        theta_sq = float(theta @ theta)
        remaining_tail = theta_sq / profile.r_max - missing
        if remaining_tail <= 0.0:
            return float("inf")
        return theta_sq / remaining_tail
    k = int(np.searchsorted(cumulative, target, side="left"))
    k = min(max(k, 1), profile.n - 1)
    lo, hi = profile.grid[k - 1], profile.grid[k]
    if cumulative[k] == cumulative[k - 1]:
        return float(lo)

    def excess(radius):
        points, weights = _interval_points(np.array([lo]), np.array([radius]))
        part = _gradient_density(points, profile.evaluate(points), profile.derivative(points)) * points ** 2 * weights
        return cumulative[k - 1] + float(np.sum(part)) - target

    return float(brentq(excess, lo, hi, xtol=1e-14 * max(1.0, hi), rtol=1e-14))
