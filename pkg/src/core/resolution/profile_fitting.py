"""
Matching detected scales against a library of K-normalized stationary profiles.

Scales are processed from the smallest up. Scale j owns the annulus between the
geometric means with its neighbours; on it the candidate and the scale minimizing
the gradient norm of the remaining residual are chosen, and the fitted bubble is
subtracted before moving on.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from src.core.evolution.energy_diagnostics import norm_HH, radial_derivative
from src.core.evolution.wave_state import WaveState
from src.core.nonlinearity.sphere_grid import sphere_grid
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.stationary import radial_quadrature
from src.core.stationary.diagnostics import K_normalize
from src.core.stationary.explicit_family import default_grid, explicit_W
from src.core.stationary.ground_state import fixed_point_amplitude, fixed_point_directions, ground_state
from src.core.stationary.radial_profile import RadialProfile

logger = logging.getLogger(__name__)

SCALE_WINDOW = 4.0
LOG_SCALE_TOL = 1e-8
DEFAULT_DIRECTIONS = 72


@dataclass(frozen=True, eq=False)
class Candidate:
    """A K-normalized stationary profile with its energy (None without a potential)."""

    name: str
    profile: RadialProfile
    energy: Optional[float] = None

    def values(self, r: np.ndarray, lam: float) -> np.ndarray:
        """lam^{-1/2} Q(r / lam), continued by the theta / r tail."""
        x = np.maximum(r / lam, self.profile.r_min)
        return lam ** -0.5 * self.profile.evaluate_extended(x)

    def derivatives(self, r: np.ndarray, lam: float) -> np.ndarray:
        x = np.maximum(r / lam, self.profile.r_min)
        return lam ** -1.5 * self.profile.derivative_extended(x)


class CandidateLibrary:
    """
    K-normalized stationary profiles of one nonlinearity.

    The builtin entries are +- the ground state and, along the directions of a sphere
    grid that are fixed points of f up to a positive factor, the bubbles mu(omega) omega W.
    Further case-C solutions can be registered.
    """

    def __init__(self, nl: VectorNonlinearity):
        self.nl = nl
        self.candidates: List[Candidate] = []

    @classmethod
    def builtin(cls, nl: VectorNonlinearity, directions: int = DEFAULT_DIRECTIONS,
                grid: Optional[np.ndarray] = None) -> "CandidateLibrary":
        if grid is None:
            grid = default_grid()
        library = cls(nl)
        state = ground_state(nl, grid=grid)
        library.register("ground_state", state.profile)
        library.register("-ground_state", state.profile.times(-1.0))

        if nl.m > 1 and directions > 0:
            shape = explicit_W(1.0, grid)
            for k, omega in enumerate(fixed_point_directions(nl, sphere_grid(nl.m, directions))):
                library.register(f"direction_{k}", shape.embed(fixed_point_amplitude(nl, omega) * omega))
        logger.info(f"Candidate library for {nl.name}: {len(library.candidates)} profiles")
        return library

    def register(self, name: str, profile: RadialProfile) -> Candidate:
        """K-normalize a stationary profile and add it."""
        if profile.m != self.nl.m:
            raise ValueError(f"Profile has {profile.m} components, nonlinearity has {self.nl.m}")
        normalized, _ = K_normalize(profile)
        energy = radial_quadrature.stationary_energy(self.nl, normalized) if self.nl.has_potential else None
        candidate = Candidate(name, normalized, energy)
        self.candidates.append(candidate)
        return candidate

    def energies(self) -> List[float]:
        return [c.energy for c in self.candidates if c.energy is not None]

    def __iter__(self):
        return iter(self.candidates)

    def __len__(self) -> int:
        return len(self.candidates)


@dataclass
class Match:
    """
    Attributes:
        candidate: Name of the matched profile
        lam: Fitted scale of the K-normalized profile
        residual: Relative gradient-norm residual on the annulus of the scale
        energy: Energy of the matched profile
    """

    candidate: str
    lam: float
    residual: float
    energy: Optional[float] = None


@dataclass
class ResolutionReport:
    t: float
    J: int
    scales: List[float]
    matches: List[Match] = field(default_factory=list)
    radiation_mass: float = 0.0
    residual_energy: float = 0.0
    budget_gap: Optional[float] = None


def annuli(scales: Sequence[float], r_max: float) -> List[tuple]:
    """[sqrt(l_{j-1} l_j), sqrt(l_j l_{j+1})] with l_0 = 0 and l_{J+1} = infinity (cut at r_max)."""
    bounds = []
    for j, lam in enumerate(scales):
        lo = np.sqrt(scales[j - 1] * lam) if j > 0 else 0.0
        hi = np.sqrt(lam * scales[j + 1]) if j + 1 < len(scales) else r_max
        bounds.append((float(lo), float(min(hi, r_max))))
    return bounds


def _gradient_misfit(r, weights, residual_du, candidate: Candidate, lam: float) -> float:
    mismatch = residual_du - candidate.derivatives(r, lam)
    return float(np.sum(np.sum(mismatch ** 2, axis=1) * r ** 2 * weights))


def _annulus_quadrature(r: np.ndarray, dr: float, lo: float, hi: float):
    mask = (r >= lo) & (r <= hi)
    weights = np.full(r.size, dr)
    indices = np.flatnonzero(mask)
    if indices.size:
        weights[indices[0]] *= 0.5
        weights[indices[-1]] *= 0.5
    return mask, weights


def fit_profiles(diff: WaveState, scales: Sequence[float], candidates: Iterable[Candidate],
                 radiation_mass: float = 0.0) -> ResolutionReport:
    """
    Fit one rescaled candidate per detected scale.

    Args:
        diff: u - v_L at time t
        scales: Detected scales, increasing
        candidates: K-normalized profiles
        radiation_mass: Energy attributed to the radiation, carried into the report

    Returns:
        ResolutionReport with one Match per scale and the energy of what is left
    """
    candidates = list(candidates)
    r = diff.grid
    residual_u = np.array(diff.u)
    residual_du = radial_derivative(diff.u, diff.dr)
    report = ResolutionReport(t=diff.t, J=len(scales), scales=list(scales), radiation_mass=radiation_mass)

    for (lo, hi), guess in zip(annuli(scales, diff.r_max), scales):
        mask, weights = _annulus_quadrature(r, diff.dr, lo, hi)
        rr, ww, target = r[mask], weights[mask], residual_du[mask]
        reference = float(np.sum(np.sum(target ** 2, axis=1) * rr ** 2 * ww))

        best = None
        for candidate in candidates:
            outcome = minimize_scalar(
                lambda x: _gradient_misfit(rr, ww, target, candidate, float(np.exp(x))),
                bounds=(np.log(guess / SCALE_WINDOW), np.log(guess * SCALE_WINDOW)),
                method="bounded", options={"xatol": LOG_SCALE_TOL},
            )
            if best is None or outcome.fun < best[0]:
                best = (float(outcome.fun), candidate, float(np.exp(outcome.x)))

        if best is None:
            break
        misfit, candidate, lam = best
        relative = float(np.sqrt(misfit / reference)) if reference > 0.0 else float("inf")
        report.matches.append(Match(candidate.name, lam, relative, candidate.energy))
        residual_u = residual_u - candidate.values(r, lam)
        residual_du = residual_du - candidate.derivatives(r, lam)
        logger.info(f"Scale {guess:.6g}: matched {candidate.name} at lambda = {lam:.10g}, residual {relative:.3e}")

    leftover = WaveState(diff.t, diff.dr, residual_u, diff.ut)
    report.residual_energy = norm_HH(leftover)
    return report


def energy_budget(report: ResolutionReport, E_total: float) -> float:
    """|sum of matched energies + radiation mass - E_total|."""
    bubbles = sum(match.energy for match in report.matches if match.energy is not None)
    return float(abs(bubbles + report.radiation_mass - E_total))
