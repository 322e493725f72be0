"""
Inward continuation of exterior solutions and classification of the outcome.

Starting from the exterior data at R, the radial equation u'' + (2/r) u' + f(u) = 0
is integrated toward the origin with an adaptive 5(4) Runge-Kutta pair. Three
outcomes are distinguished:

    A_blowup  the solution leaves every bounded set at some R_theta > 0
    B_notL6   the solution reaches the origin behaving like c / r, c != 0
    C_energy  the solution is regular at the origin and has finite energy
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from src.core.errors import StiffnessFailure
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.stationary import radial_quadrature
from src.core.stationary.radial_profile import RadialProfile

logger = logging.getLogger(__name__)

R_STOP = 1e-6
RTOL = 1e-10
BLOWUP_LEVEL = 1e8
# A stalled integration that grew by this factor since R is read as a pole the event missed.
STALLED_GROWTH = 1e3
CLASSIFY_WINDOW_END = 1e-4
SINGULAR_CHARGE_RATIO = 1e-4
POINTS_PER_DECADE = 64


class ZCase(Enum):
    A_BLOWUP = "A_blowup"
    B_NOT_L6 = "B_notL6"
    C_ENERGY = "C_energy"


@dataclass(frozen=True, eq=False)
class ZThetaSolution:
    """
    Attributes:
        theta: Asymptotic charge
        R_theta: Blow-up radius for case A, 0 otherwise
        case: Classification of the continued solution
        profile: The computed solution on its interval of existence
        energy: E(Z_theta) for case C with a potential, else None
        gradient_energy: int |Z'|^2 r^2 dr for case C, else None
    """

    theta: np.ndarray
    R_theta: float
    case: ZCase
    profile: RadialProfile
    energy: Optional[float] = None
    gradient_energy: Optional[float] = None


def _radial_system(nl: VectorNonlinearity):
    m = nl.m

    def rhs(r, y):
        u, du = y[:m], y[m:]
        return np.concatenate([du, -2.0 * du / r - nl.eval(u)])

    return rhs


def _blowup_event(m: int):
    def event(r, y):
        return float(np.linalg.norm(y[:m])) - BLOWUP_LEVEL

    event.terminal = True
    event.direction = 1.0
    return event


def _join(inner_r: np.ndarray, inner_y: np.ndarray, outer: RadialProfile, m: int) -> RadialProfile:
    order = np.argsort(inner_r)
    inner_r, inner_y = inner_r[order], inner_y[:, order]
    keep = inner_r < outer.r_min
    grid = np.concatenate([inner_r[keep], outer.grid])
    values = np.concatenate([inner_y[:m, keep].T, outer.values])
    derivs = np.concatenate([inner_y[m:, keep].T, outer.derivs])
    return RadialProfile(grid, values, derivs)


def _singular_charge(profile: RadialProfile) -> np.ndarray:
    """Intercept of a linear fit of r u(r) on the classification window."""
    mask = profile.grid <= CLASSIFY_WINDOW_END
    if np.count_nonzero(mask) < 2:
        mask = np.zeros(profile.n, dtype=bool)
        mask[:2] = True
    r = profile.grid[mask]
    ru = r[:, None] * profile.values[mask]
    coefficients = np.polyfit(r, ru, 1)
    return coefficients[1]


def _remove_singular_mode(profile: RadialProfile, charge: np.ndarray) -> RadialProfile:
    """Subtract the singular mode charge / r from values and derivatives."""
    r = profile.grid[:, None]
    return RadialProfile(profile.grid, profile.values - charge / r, profile.derivs + charge / r ** 2)


def _regular_extension(profile: RadialProfile) -> RadialProfile:
    """Prepend the origin using the even expansion u = a + b r^2 fitted at the first node."""
    r0 = profile.grid[0]
    u0, du0 = profile.values[0], profile.derivs[0]
    origin_value = u0 - 0.5 * r0 * du0
    grid = np.concatenate([[0.0], profile.grid])
    values = np.vstack([origin_value, profile.values])
    derivs = np.vstack([np.zeros_like(du0), profile.derivs])
    return RadialProfile(grid, values, derivs, regular_at_origin=True)


def continue_inward(nl: VectorNonlinearity, outer: RadialProfile, r_stop: float = R_STOP,
                    rtol: float = RTOL) -> ZThetaSolution:
    """
    Integrate the radial stationary equation from outer.r_min down to r_stop and classify.

    Args:
        nl: Nonlinearity
        outer: Exterior solution from solve_exterior_fixed_point
        r_stop: Smallest radius to reach
        rtol: Relative tolerance of the integrator

    Returns:
        ZThetaSolution with case, R_theta, the joined profile and energies

    Raises:
        StiffnessFailure: If the integrator stalls below the blow-up level
    """
    if not 0.0 < r_stop < outer.r_min:
        raise ValueError(f"r_stop must lie in (0, {outer.r_min}), got {r_stop}")

    m = nl.m
    theta = outer.asymptotic_charge()
    R = outer.r_min
    y0 = np.concatenate([outer.values[0], outer.derivs[0]])
    atol = 1e-2 * rtol * max(float(np.max(np.abs(y0))), 1e-300)

    count = int(np.ceil(np.log10(R / r_stop) * POINTS_PER_DECADE)) + 1
    t_eval = np.geomspace(R, r_stop, count)
    t_eval[0], t_eval[-1] = R, r_stop

    solution = solve_ivp(
        _radial_system(nl), (R, r_stop), y0, method="RK45", t_eval=t_eval,
        rtol=rtol, atol=atol, events=_blowup_event(m), dense_output=True,
    )

    inner_r, inner_y = solution.t, solution.y
    if solution.status == 1 and solution.t_events[0].size:
        r_blow = float(solution.t_events[0][0])
        inner_r = np.append(inner_r, r_blow)
        inner_y = np.hstack([inner_y, solution.y_events[0][0][:, None]])
        logger.info(f"theta = {theta}: blow-up at R_theta = {r_blow:.6g}")
        return ZThetaSolution(theta, r_blow, ZCase.A_BLOWUP, _join(inner_r, inner_y, outer, m))

    if solution.status != 0:
        r_last, last_level = R, 0.0
        if solution.sol is not None:
            r_last = float(solution.sol.ts[-1])
            y_last = solution.sol(r_last)
            last_level = float(np.linalg.norm(y_last[:m]))
            if r_last < inner_r[-1]:
                inner_r = np.append(inner_r, r_last)
                inner_y = np.hstack([inner_y, y_last[:, None]])
        if last_level >= STALLED_GROWTH * float(np.linalg.norm(y0[:m])):
            logger.info(f"theta = {theta}: integrator stalled at |u| = {last_level:.3e}, read as blow-up")
            return ZThetaSolution(theta, r_last, ZCase.A_BLOWUP, _join(inner_r, inner_y, outer, m))
        raise StiffnessFailure(f"Inward integration stalled at r = {r_last:.6g}: {solution.message}")

    profile = _join(inner_r, inner_y, outer, m)
    charge = _singular_charge(profile)
    theta_norm = float(np.linalg.norm(theta))
    if float(np.linalg.norm(charge)) > SINGULAR_CHARGE_RATIO * theta_norm:
        logger.info(f"theta = {theta}: singular at the origin, r u -> {charge}")
        return ZThetaSolution(theta, 0.0, ZCase.B_NOT_L6, profile)

    regular = _regular_extension(_remove_singular_mode(profile, charge))
    gradient = radial_quadrature.gradient_energy(regular)
    energy = radial_quadrature.stationary_energy(nl, regular) if nl.has_potential else None
    logger.info(f"theta = {theta}: regular finite-energy solution, gradient energy {gradient:.10g}")
    return ZThetaSolution(theta, 0.0, ZCase.C_ENERGY, regular, energy=energy, gradient_energy=gradient)
