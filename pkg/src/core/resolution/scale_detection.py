"""
Detection of bubble scales from the cumulative gradient energy of u - v_L.

For candidate energies E'_1, ..., E'_J the j-th scale is the radius where

    int_{r <= lambda} |grad diff|^2 r^2 dr + e^{-|t|} int_0^lambda e^{-r} r^2 dr
        = 3 (E'_1 + ... + E'_{j-1}) + 3/2 E'_j.

The exponential term makes the left side strictly increasing, so each scale is
unique; it is negligible once |t| is large.
"""

import logging
from typing import List, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import brentq

from src.core.errors import EnergyBudgetExceeded
from src.core.evolution.energy_diagnostics import radial_derivative, tail_charge
from src.core.evolution.wave_state import WaveState

logger = logging.getLogger(__name__)

LOWEST_SCALE = 1e-12
MAX_EXPANSIONS = 200


def regularizer(lam, t: float):
    """e^{-|t|} int_0^lambda e^{-r} r^2 dr."""
    lam = np.asarray(lam, dtype=float)
    return np.exp(-abs(t)) * (2.0 - np.exp(-lam) * (lam ** 2 + 2.0 * lam + 2.0))


class CumulativeEnergy:
    """G(lambda) = int_{r <= lambda} |d_r u|^2 r^2 dr of a state, continued past R_max by its theta / r tail."""

    def __init__(self, state: WaveState):
        du = radial_derivative(state.u, state.dr)
        self.r = state.grid
        self.t = state.t
        self.cumulative = cumulative_trapezoid(np.sum(du * du, axis=1) * self.r ** 2, dx=state.dr, initial=0.0)
        theta = tail_charge(state)
        self.theta_sq = float(theta @ theta)
        self.r_max = state.r_max

    def gradient(self, lam: float) -> float:
        if lam <= self.r_max:
            return float(np.interp(lam, self.r, self.cumulative))
        return float(self.cumulative[-1] + self.theta_sq * (1.0 / self.r_max - 1.0 / lam))

    def __call__(self, lam: float) -> float:
        return self.gradient(lam) + float(regularizer(lam, self.t))

    @property
    def available(self) -> float:
        """sup over lambda of G plus the regularizer."""
        return float(self.cumulative[-1] + self.theta_sq / self.r_max + 2.0 * np.exp(-abs(self.t)))


def scale_targets(energies: Sequence[float]) -> List[float]:
    """3 * sum_{k<j} E'_k + 3/2 E'_j for each j."""
    targets = []
    below = 0.0
    for energy in energies:
        targets.append(3.0 * below + 1.5 * energy)
        below += energy
    return targets


def detect_scales(diff: WaveState, energies: Sequence[float], eps: float = 1e-10) -> List[float]:
    """
    Scales lambda_1 < ... < lambda_J of the bubbles in diff.

    Args:
        diff: u - v_L at time t
        energies: Candidate energies E'_j, all positive
        eps: Tolerance on log(lambda)

    Returns:
        The J scales, strictly increasing

    Raises:
        EnergyBudgetExceeded: If the energy of diff cannot reach the target of some j;
            the scales found before it are attached to the error
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    if any(energy <= 0.0 for energy in energies):
        raise ValueError(f"Candidate energies must be positive, got {list(energies)}")

    g = CumulativeEnergy(diff)
    available = g.available
    scales: List[float] = []
    for j, target in enumerate(scale_targets(energies), start=1):
        if target >= available:
            raise EnergyBudgetExceeded(
                f"Scale {j}: target {target:.6g} exceeds available energy {available:.6g}", scales, j
            )
        hi = max(g.r_max, LOWEST_SCALE)
        expansions = 0
        while g(hi) < target:
            hi *= 2.0
            expansions += 1
            if expansions > MAX_EXPANSIONS:
                raise EnergyBudgetExceeded(f"Scale {j}: target {target:.6g} not reached", scales, j)

        log_lam = brentq(lambda x: g(np.exp(x)) - target, np.log(LOWEST_SCALE), np.log(hi), xtol=eps)
        lam = float(np.exp(log_lam))
        logger.debug(f"Scale {j}: lambda = {lam:.10g} (target {target:.6g})")
        scales.append(lam)
    return scales
