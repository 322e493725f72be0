"""
Diagnostics on stationary profiles: Pohozaev and equation residuals, K-normalization,
localized energy radii, W-family fits and the finiteness/indecomposability check of
an energy list.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import DegenerateProfile
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.stationary import radial_quadrature
from src.core.stationary.explicit_family import explicit_W
from src.core.stationary.radial_profile import RadialProfile

logger = logging.getLogger(__name__)

ENERGY_CLUSTER_RTOL = 1e-6
MAX_COMBINATION_TERMS = 64


@dataclass(frozen=True, eq=False)
class WFamilyFit:
    """Best match zeta W_(lambda) of a profile, with sup residual relative to sup |p|."""

    zeta: np.ndarray
    lam: float
    residual: float


@dataclass
class EnergyAssumptionReport:
    """
    Attributes:
        energies: Distinct energies E_1 < ... < E_p after clustering
        finite: Whether the distinct list is finite (always true for a computed list)
        decompositions: For each failing index j, coefficients alpha with E_j = sum alpha_k E_k
        positive: Whether E_1 > 0
    """

    energies: List[float]
    finite: bool = True
    decompositions: Dict[int, List[int]] = field(default_factory=dict)
    positive: bool = True

    @property
    def holds(self) -> bool:
        return self.finite and self.positive and not self.decompositions


def pohozaev_residual(nl: VectorNonlinearity, p: RadialProfile) -> float:
    """int |p'|^2 - 6 int F(p), tails included; vanishes on stationary solutions."""
    return radial_quadrature.gradient_energy(p) - 6.0 * radial_quadrature.potential_integral(nl, p)


def _second_derivatives(p: RadialProfile) -> np.ndarray:
    """
    u'' at interior nodes from the quintic Hermite polynomial matching values and
    derivatives at the node and both neighbours.
    """
    r = p.grid
    a = r[:-2] - r[1:-1]
    b = r[2:] - r[1:-1]
    h = np.maximum(-a, b)
    sa, sb = a / h, b / h

    # Local coordinate s = x / h, polynomial y_i + d_i h s + sum_{k=2..5} e_k s^k.
    powers = np.arange(2, 6)
    matrix = np.empty((h.size, 4, 4))
    matrix[:, 0, :] = sa[:, None] ** powers
    matrix[:, 1, :] = powers * sa[:, None] ** (powers - 1)
    matrix[:, 2, :] = sb[:, None] ** powers
    matrix[:, 3, :] = powers * sb[:, None] ** (powers - 1)

    y, d = p.values, p.derivs
    y0, d0 = y[1:-1], d[1:-1]
    hh = h[:, None]
    rhs = np.stack([
        y[:-2] - y0 - d0 * hh * sa[:, None],
        (d[:-2] - d0) * hh,
        y[2:] - y0 - d0 * hh * sb[:, None],
        (d[2:] - d0) * hh,
    ], axis=1)
    coefficients = np.linalg.solve(matrix, rhs)
    return 2.0 * coefficients[:, 0, :] / hh ** 2


def stationarity_residual(nl: VectorNonlinearity, p: RadialProfile) -> float:
    """
    Discrete L^2 norm (weight r^2 dr) of u'' + (2/r) u' + f(u) over the interior nodes.

    Second derivatives are fourth-order accurate on smooth profiles.
    """
    if p.n < 3:
        raise ValueError("Stationarity residual needs at least three nodes")
    r = p.grid[1:-1]
    second = _second_derivatives(p)
    residual = second + 2.0 * p.derivs[1:-1] / r[:, None] + nl.eval(p.values[1:-1])
    weights = 0.5 * (p.grid[2:] - p.grid[:-2]) * r ** 2
    return float(np.sqrt(np.sum(np.sum(residual ** 2, axis=1) * weights)))


def K_normalize(p: RadialProfile) -> Tuple[RadialProfile, float]:
    """
    Rescale p so that half its gradient energy lies in the unit ball.

    Returns:
        (lambda^{-1/2} p(r / lambda), lambda)

    Raises:
        DegenerateProfile: If p carries no gradient energy
    """
    total = radial_quadrature.gradient_energy(p)
    if not total > 0.0:
        raise DegenerateProfile("Cannot K-normalize a profile with zero gradient energy")
    half_radius = radial_quadrature.half_energy_radius(p, 0.5, total)
    if not np.isfinite(half_radius) or half_radius <= 0.0:
        raise DegenerateProfile(f"Half-energy radius {half_radius} is not a positive finite number")
    lam = 1.0 / half_radius
    return p.rescaled(lam), lam


def localized_energy_radius(p: RadialProfile, eps: float) -> float:
    """Smallest radius C with int_{r <= C} |p'|^2 r^2 dr >= total - eps."""
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    total = radial_quadrature.gradient_energy(p)
    if total <= eps:
        return p.r_min
    return radial_quadrature.half_energy_radius(p, (total - eps) / total, total)


def fit_w_family(p: RadialProfile, theta=None) -> WFamilyFit:
    """
    Match p against zeta W_(lambda) using its value at the origin and its charge.

    zeta W_(lambda) has value zeta lambda^{-1/2} at 0 and charge sqrt(3) lambda^{1/2} zeta,
    so lambda = |theta| / (sqrt(3) |p(0)|).
    """
    if theta is None:
        theta = p.asymptotic_charge()
    theta = np.asarray(theta, dtype=float).reshape(p.m)
    origin = p.values[0]
    origin_norm = float(np.linalg.norm(origin))
    theta_norm = float(np.linalg.norm(theta))
    if origin_norm == 0.0 or theta_norm == 0.0:
        raise DegenerateProfile("W-family fit needs a nonzero value at the origin and a nonzero charge")

    lam = theta_norm / (np.sqrt(3.0) * origin_norm)
    zeta = origin * np.sqrt(lam)
    model = explicit_W(lam, p.grid).values * zeta
    scale = float(np.max(np.linalg.norm(p.values, axis=1)))
    residual = float(np.max(np.linalg.norm(p.values - model, axis=1))) / scale
    return WFamilyFit(zeta=zeta, lam=float(lam), residual=residual)


def _cluster(energies: Sequence[float], rtol: float) -> List[float]:
    distinct: List[float] = []
    for energy in sorted(float(e) for e in energies):
        if distinct and abs(energy - distinct[-1]) <= rtol * max(abs(energy), abs(distinct[-1])):
            continue
        distinct.append(energy)
    return distinct


def _decompose(target: float, parts: List[float], rtol: float) -> Optional[List[int]]:
    """Non-negative integer coefficients with sum alpha_k parts_k = target, if any."""
    tolerance = rtol * abs(target)

    def search(index: int, remaining: float, terms: int) -> Optional[List[int]]:
        if abs(remaining) <= tolerance:
            return [0] * (len(parts) - index)
        if index == len(parts) or remaining < -tolerance or terms >= MAX_COMBINATION_TERMS:
            return None
        part = parts[index]
        count = int(np.floor((remaining + tolerance) / part))
        for alpha in range(min(count, MAX_COMBINATION_TERMS - terms), -1, -1):
            rest = search(index + 1, remaining - alpha * part, terms + alpha)
            if rest is not None:
                return [alpha] + rest
        return None

    if not parts or any(part <= 0.0 for part in parts):
        return None
    found = search(0, target, 0)
    if found is None or not any(found):
        return None
    return found


def check_energy_assumptions(energies: Sequence[float], rtol: float = ENERGY_CLUSTER_RTOL) -> EnergyAssumptionReport:
    """
    Check a computed list of stationary energies for finiteness and indecomposability.

    The list is first clustered to distinct values E_1 < ... < E_p. Then for each j it
    searches a non-negative integer combination of the other E_k equal to E_j.

    Returns:
        EnergyAssumptionReport; report.holds is True when no E_j decomposes
    """
    distinct = _cluster(energies, rtol)
    report = EnergyAssumptionReport(energies=distinct, finite=all(np.isfinite(distinct)))
    if distinct and distinct[0] <= 0.0:
        report.positive = False
        logger.warning(f"Smallest stationary energy {distinct[0]:.6g} is not positive")
        return report

    for j, target in enumerate(distinct):
        others = distinct[:j] + distinct[j + 1:]
        found = _decompose(target, others, rtol)
        if found is not None:
            alpha = found[:j] + [0] + found[j:]
            report.decompositions[j] = alpha
            logger.info(f"Energy E_{j + 1} = {target:.10g} decomposes as {alpha}")
    return report
