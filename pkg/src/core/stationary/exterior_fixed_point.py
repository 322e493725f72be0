"""
Exterior construction of the stationary solution with prescribed charge theta.

Near infinity the radial solution asymptotic to theta / r is the fixed point of

    Phi(u)(r) = theta / r - int_r^inf s^-2 int_s^inf rho^2 f(u(rho)) drho ds

on the ball {sup r|u(r)| <= 2|theta|} of [R, inf). The iteration runs on a
geometric grid up to R_cut = 1e6 R; beyond R_cut both integrals are closed
analytically from f(theta / rho) = rho^-5 f(theta).
"""

import logging
from typing import List, Optional

import numpy as np
from scipy.integrate import cumulative_simpson

from src.core.errors import ContractionFailure
from src.core.nonlinearity.property_checks import lipschitz_bound_fit
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.stationary.radial_profile import RadialProfile

logger = logging.getLogger(__name__)

POINTS_PER_DECADE = 32
CUTOFF_FACTOR = 1e6
MAX_ITERATIONS = 200
LIPSCHITZ_SAMPLES = 4000
# Weighted-norm estimate: r |Phi(u) - Phi(v)| <= (16/3) C |theta|^4 / R^2 * sup r |u - v|.
CONTRACTION_CONSTANT = 16.0 / 3.0


def exterior_grid(R: float) -> np.ndarray:
    decades = np.log10(CUTOFF_FACTOR)
    count = int(round(decades * POINTS_PER_DECADE)) + 1
    return np.geomspace(R, R * CUTOFF_FACTOR, count)


def contraction_factor(nl: VectorNonlinearity, theta, R: float, lipschitz: Optional[float] = None) -> float:
    """Contraction constant of Phi on the ball of radius 2|theta| over [R, inf)."""
    theta = np.asarray(theta, dtype=float).reshape(nl.m)
    if lipschitz is None:
        lipschitz = lipschitz_bound_fit(nl, LIPSCHITZ_SAMPLES, seed=0)
    return CONTRACTION_CONSTANT * lipschitz * float(np.linalg.norm(theta)) ** 4 / R ** 2


def minimal_contraction_radius(nl: VectorNonlinearity, theta, safety: float = 1.25,
                               lipschitz: Optional[float] = None) -> float:
    """Smallest R (times a safety factor, at least 1) with contraction factor below 1/2."""
    theta = np.asarray(theta, dtype=float).reshape(nl.m)
    if lipschitz is None:
        lipschitz = lipschitz_bound_fit(nl, LIPSCHITZ_SAMPLES, seed=0)
    radius = np.sqrt(2.0 * CONTRACTION_CONSTANT * lipschitz) * float(np.linalg.norm(theta)) ** 2
    return float(max(1.0, safety * radius))


def _apply_map(nl: VectorNonlinearity, theta: np.ndarray, r: np.ndarray, u: np.ndarray):
    dx = np.log(r[1] / r[0])
    r_cut = r[-1]
    f_theta = nl.eval(theta)

    # Inner integral I(s) = int_s^inf rho^2 f(u) drho, integrated in log rho.
    inner_integrand = r[:, None] ** 3 * nl.eval(u)
    inner_cumulative = cumulative_simpson(inner_integrand, dx=dx, axis=0, initial=0.0)
    inner = inner_cumulative[-1] - inner_cumulative + f_theta / (2.0 * r_cut ** 2)

    # Outer integral K(r) = int_r^inf I(s) / s^2 ds.
    outer_integrand = inner / r[:, None]
    outer_cumulative = cumulative_simpson(outer_integrand, dx=dx, axis=0, initial=0.0)
    outer = outer_cumulative[-1] - outer_cumulative + f_theta / (6.0 * r_cut ** 3)

    values = theta / r[:, None] - outer
    derivs = (inner - theta) / r[:, None] ** 2
    return values, derivs


def solve_exterior_fixed_point(nl: VectorNonlinearity, theta, R: float, tol: float = 1e-13,
                               max_iterations: int = MAX_ITERATIONS,
                               check_contraction: bool = True,
                               history: Optional[List[float]] = None) -> RadialProfile:
    """
    Iterate Phi_theta from u = theta / r until sup r|u_{k+1} - u_k| < tol.

    Args:
        nl: Nonlinearity
        theta: Asymptotic charge in R^m
        R: Inner radius of the exterior region
        tol: Stopping tolerance in the weighted sup norm, relative to max(1, |theta|)
        max_iterations: Iteration cap
        check_contraction: Check the contraction factor estimate before iterating
        history: Optional list receiving the successive iterate distances

    Returns:
        RadialProfile on [R, 1e6 R]

    Raises:
        ContractionFailure: If R is too small, the iterates leave the ball, or do not converge
    """
    if R <= 0.0:
        raise ValueError(f"Exterior radius must be positive, got {R}")
    if tol <= 0.0:
        raise ValueError(f"Tolerance must be positive, got {tol}")
    theta = np.asarray(theta, dtype=float).reshape(nl.m)
    r = exterior_grid(R)
    theta_norm = float(np.linalg.norm(theta))

    if theta_norm == 0.0:
        zeros = np.zeros((r.size, nl.m))
        return RadialProfile(r, zeros, zeros)

    if check_contraction:
        factor = contraction_factor(nl, theta, R)
        if factor >= 0.5:
            raise ContractionFailure(
                f"R = {R} too small for |theta| = {theta_norm:.6g}: contraction factor {factor:.3g} >= 1/2"
            )

    u = np.tile(theta, (r.size, 1)) / r[:, None]
    derivs = -np.tile(theta, (r.size, 1)) / r[:, None] ** 2
    threshold = tol * max(1.0, theta_norm)
    previous = np.inf

    for iteration in range(1, max_iterations + 1):
        new_u, derivs = _apply_map(nl, theta, r, u)
        distance = float(np.max(r * np.linalg.norm(new_u - u, axis=1)))
        ball_norm = float(np.max(r * np.linalg.norm(new_u, axis=1)))
        u = new_u
        if history is not None:
            history.append(distance)
        logger.debug(f"Fixed-point iteration {iteration}: distance {distance:.3e}, weighted norm {ball_norm:.6g}")

        if not np.isfinite(distance) or ball_norm > 2.0 * theta_norm:
            raise ContractionFailure(
                f"Iterate left the ball sup r|u| <= 2|theta| at iteration {iteration} (norm {ball_norm:.6g})"
            )
        if distance < threshold:
            logger.info(f"Exterior fixed point converged in {iteration} iterations (R = {R})")
            return RadialProfile(r, u, derivs)
        if iteration > 2 and distance > previous and distance > 10.0 * threshold:
            raise ContractionFailure(f"Iterates diverge at iteration {iteration}: {distance:.3e} > {previous:.3e}")
        previous = distance

    raise ContractionFailure(f"No convergence after {max_iterations} iterations (last distance {previous:.3e})")
