"""
Closed-form stationary profiles: the bubble W(r) = (1 + r^2/3)^{-1/2} with its
critical rescalings, and the linearized-scaling profile Y = r W' + W / 2.
"""

import numpy as np

from src.core.stationary.radial_profile import RadialProfile

SQRT3 = np.sqrt(3.0)


def default_grid(r_max: float = 1e4, points_per_decade: int = 64, r_min: float = 1e-4) -> np.ndarray:
    """Origin plus a geometric grid on [r_min, r_max]."""
    decades = np.log10(r_max / r_min)
    count = int(np.ceil(decades * points_per_decade)) + 1
    return np.concatenate([[0.0], np.geomspace(r_min, r_max, count)])


def explicit_W(lam: float, grid) -> RadialProfile:
    """
    W_(lambda)(r) = lambda^{-1/2} (1 + r^2 / (3 lambda^2))^{-1/2} with exact derivatives.

    Args:
        lam: Scale, positive
        grid: Increasing radii, may start at 0

    Returns:
        Scalar RadialProfile
    """
    if lam <= 0.0:
        raise ValueError(f"Scale must be positive, got {lam}")
    r = np.asarray(grid, dtype=float)
    s = 1.0 + r ** 2 / (3.0 * lam ** 2)
    values = lam ** -0.5 * s ** -0.5
    derivs = -lam ** -0.5 * r / (3.0 * lam ** 2) * s ** -1.5
    return RadialProfile(r, values, derivs, regular_at_origin=bool(r[0] == 0.0))


def explicit_Y(lam: float, grid) -> RadialProfile:
    """
    Rescaled Y_(lambda) of Y(r) = r W'(r) + W(r) / 2 = (1/2 - r^2/6)(1 + r^2/3)^{-3/2}.

    Y spans the kernel of the linearization around W in the scaling direction.
    """
    if lam <= 0.0:
        raise ValueError(f"Scale must be positive, got {lam}")
    r = np.asarray(grid, dtype=float)
    x = r / lam
    s = 1.0 + x ** 2 / 3.0
    values = lam ** -0.5 * (0.5 - x ** 2 / 6.0) * s ** -1.5
    derivs = -lam ** -1.5 * x * (5.0 / 6.0 - x ** 2 / 18.0) * s ** -2.5
    return RadialProfile(r, values, derivs, regular_at_origin=bool(r[0] == 0.0))


def w_charge(lam: float) -> float:
    """lim r W_(lambda)(r) = sqrt(3 lambda)."""
    return float(np.sqrt(3.0 * lam))
