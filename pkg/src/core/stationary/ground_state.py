"""
Ground states: maximizers of F on the unit sphere, scaled into stationary bubbles.

If omega maximizes F on the sphere with F(omega) > 0, then zeta = mu omega with
mu = (6 F(omega))^{-1/4} solves f(zeta) = zeta and mu omega W is a ground state.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from src.core.errors import EmptyZ, MissingPotential
from src.core.nonlinearity.sphere_grid import sphere_grid
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.stationary.explicit_family import default_grid, explicit_W
from src.core.stationary.radial_profile import RadialProfile

logger = logging.getLogger(__name__)

SWEEP_POINTS = 10_000
REFINED_POINTS = 10
RANDOM_MULTISTARTS = 64
MAX_ASCENT_STEPS = 10_000
TIE_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class GroundState:
    omega: np.ndarray
    Fmax: float
    mu: float
    profile: RadialProfile


def _tangential(gradient: np.ndarray, omega: np.ndarray) -> np.ndarray:
    return gradient - np.dot(gradient, omega) * omega


def _ascend(nl: VectorNonlinearity, omega: np.ndarray, sphere_tol: float) -> np.ndarray:
    """
    Projected gradient ascent on the sphere with Armijo backtracking.

    Once F no longer resolves the improvement, a step is accepted when it keeps F
    within rounding and shrinks the tangential gradient.
    """
    value = float(nl.energy_density(omega))
    direction = _tangential(nl.eval(omega), omega)
    step = 1.0
    for _ in range(MAX_ASCENT_STEPS):
        slope = float(np.dot(direction, direction))
        if np.sqrt(slope) < sphere_tol:
            break
        while step > 1e-16:
            candidate = omega + step * direction
            candidate /= np.linalg.norm(candidate)
            candidate_value = float(nl.energy_density(candidate))
            candidate_direction = _tangential(nl.eval(candidate), candidate)
            rounding = 1e-14 * max(1.0, abs(value))
            improves = candidate_value >= value + 1e-4 * step * slope
            flat = (abs(candidate_value - value) <= rounding
                    and np.dot(candidate_direction, candidate_direction) < slope)
            if improves or flat:
                omega, value, direction = candidate, candidate_value, candidate_direction
                step = min(2.0 * step, 1.0)
                break
            step *= 0.5
        else:
            break
    return omega


def _starting_points(m: int, multistarts: int) -> np.ndarray:
    if m <= 3:
        return sphere_grid(m, SWEEP_POINTS)
    return sphere_grid(m, max(multistarts, 1), seed=0)


def maximize_on_sphere(nl: VectorNonlinearity, sphere_tol: float = 1e-12,
                       multistarts: int = RANDOM_MULTISTARTS) -> np.ndarray:
    """
    Maximize F over the unit sphere.

    Returns:
        The lexicographically largest maximizer among the converged candidates
    """
    if not nl.has_potential:
        raise MissingPotential(f"Nonlinearity '{nl.name}' has no potential to maximize")

    starts = _starting_points(nl.m, multistarts)
    values = nl.energy_density(starts)
    if nl.m <= 3:
        best = np.argsort(values)[::-1][:REFINED_POINTS]
        starts = starts[best]

    refined = np.array([_ascend(nl, omega.copy(), sphere_tol) for omega in starts])
    refined_values = nl.energy_density(refined)
    top = float(np.max(refined_values))
    tied = refined[refined_values >= top - TIE_TOLERANCE * max(1.0, abs(top))]
    order = sorted(range(len(tied)), key=lambda i: tuple(tied[i]), reverse=True)
    return tied[order[0]]


def ground_state(nl: VectorNonlinearity, sphere_tol: float = 1e-12,
                 multistarts: int = RANDOM_MULTISTARTS, grid: Optional[np.ndarray] = None) -> GroundState:
    """
    Compute omega, Fmax, mu and the profile mu omega W.

    Args:
        nl: Nonlinearity with a potential
        sphere_tol: Tangential gradient tolerance of the ascent
        multistarts: Random starts for m > 3
        grid: Radii of the returned profile (defaults to the origin plus 1e-4..1e4)

    Raises:
        MissingPotential: If nl has no potential
        EmptyZ: If max F <= 0 on the sphere
    """
    omega = maximize_on_sphere(nl, sphere_tol, multistarts)
    f_max = float(nl.energy_density(omega))
    if f_max <= 0.0:
        raise EmptyZ(f"max F = {f_max:.6g} <= 0 on the sphere for '{nl.name}': no stationary solution exists")

    mu = (6.0 * f_max) ** -0.25
    if grid is None:
        grid = default_grid()
    profile = explicit_W(1.0, grid).embed(mu * omega)
    logger.info(f"Ground state of {nl.name}: omega = {omega}, Fmax = {f_max:.15g}, mu = {mu:.15g}")
    return GroundState(omega=omega, Fmax=f_max, mu=mu, profile=profile)


def fixed_point_directions(nl: VectorNonlinearity, directions, tol: float = 1e-9) -> List[np.ndarray]:
    """
    Unit vectors omega with f(omega) = c omega for some c > 0.

    Along such omega the point zeta = c^{-1/4} omega solves f(zeta) = zeta, so
    zeta W_(lambda) is stationary.
    """
    kept = []
    for omega in np.asarray(directions, dtype=float).reshape(-1, nl.m):
        omega = omega / np.linalg.norm(omega)
        f = nl.eval(omega)
        c = float(np.dot(f, omega))
        if c > 0.0 and np.linalg.norm(f - c * omega) <= tol * max(1.0, abs(c)):
            kept.append(omega)
    return kept


def fixed_point_amplitude(nl: VectorNonlinearity, omega) -> float:
    """mu with f(mu omega) = mu omega, for a fixed-point direction omega."""
    omega = np.asarray(omega, dtype=float).reshape(nl.m)
    c = float(np.dot(nl.eval(omega), omega))
    if c <= 0.0:
        raise ValueError(f"Direction {omega} is not a focusing fixed-point direction")
    return c ** -0.25
