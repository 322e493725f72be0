"""
Radiation fields of outgoing radial waves.

A free radial wave satisfies r u_t(t, r) - g(t - r) -> 0 and r u_r(t, r) + g(t - r) -> 0
as t -> infinity, in L^2(dr). The profile g is estimated on the eta = t - r grid of the
latest sample time and averaged over all sample times.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from src.core.errors import InsufficientWindow
from src.core.evolution.energy_diagnostics import radial_derivative
from src.core.evolution.wave_state import WaveState

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RadiationField:
    """
    Attributes:
        eta_grid: Increasing eta values
        g: g(eta), shape (len(eta_grid), m)
        l2_mass: int |g|^2 d eta
        times: Sample times used
        residuals: Per time, ||r u_r + g(t - r)||_{L^2(dr)}
        scaled_residuals: Per time, t times the residual
    """

    eta_grid: np.ndarray
    g: np.ndarray
    l2_mass: float
    times: np.ndarray
    residuals: np.ndarray
    scaled_residuals: np.ndarray

    @property
    def m(self) -> int:
        return self.g.shape[1]

    def sample(self, eta) -> np.ndarray:
        """g at arbitrary eta, zero outside the eta grid."""
        eta = np.asarray(eta, dtype=float)
        columns = [np.interp(eta, self.eta_grid, self.g[:, k], left=0.0, right=0.0) for k in range(self.m)]
        return np.stack(columns, axis=-1)

    def outgoing_state(self, t: float, dr: float, nr: int) -> WaveState:
        """
        The purely outgoing free wave w = H(t - r), H' = g, sampled at time t.

        H vanishes below the eta grid; u(t, 0) uses the even expansion through the first two radii.
        """
        primitive = cumulative_trapezoid(self.g, self.eta_grid, axis=0, initial=0.0)
        r = dr * np.arange(nr)
        eta = t - r
        w = np.stack(
            [np.interp(eta, self.eta_grid, primitive[:, k], left=0.0, right=primitive[-1, k]) for k in range(self.m)],
            axis=-1,
        )
        wt = self.sample(eta)
        u = np.empty_like(w)
        ut = np.empty_like(wt)
        u[1:] = w[1:] / r[1:, None]
        ut[1:] = wt[1:] / r[1:, None]
        u[0] = (4.0 * u[1] - u[2]) / 3.0
        ut[0] = (4.0 * ut[1] - ut[2]) / 3.0
        return WaveState(t, dr, u, ut)


def _profile_at(state: WaveState, eta: np.ndarray) -> np.ndarray:
    """r u_t(t, t - eta), zero where t - eta leaves [0, R_max]."""
    r = state.grid
    ru_t = r[:, None] * state.ut
    radius = state.t - eta
    columns = [np.interp(radius, r, ru_t[:, k], left=0.0, right=0.0) for k in range(state.m)]
    return np.stack(columns, axis=-1)


def _radial_residual(state: WaveState, eta_grid: np.ndarray, g: np.ndarray) -> float:
    r = state.grid
    du = radial_derivative(state.u, state.dr)
    columns = [np.interp(state.t - r, eta_grid, g[:, k], left=0.0, right=0.0) for k in range(state.m)]
    mismatch = r[:, None] * du + np.stack(columns, axis=-1)
    return float(np.sqrt(trapezoid(np.sum(mismatch ** 2, axis=1), dx=state.dr)))


def extract_radiation(states: Sequence[WaveState]) -> RadiationField:
    """
    Estimate the radiation profile from late-time states.

    Args:
        states: Two or more states at distinct times, all on the same grid

    Returns:
        RadiationField on the eta grid of the latest state

    Raises:
        InsufficientWindow: If fewer than two distinct sample times are given
    """
    ordered = sorted(states, key=lambda s: s.t)
    times = np.array([s.t for s in ordered])
    if len(ordered) < 2 or np.unique(times).size < 2:
        raise InsufficientWindow(f"Radiation extraction needs at least two sample times, got {np.unique(times).size}")

    latest = ordered[-1]
    eta_grid = latest.t - latest.grid[::-1]
    estimates = [_profile_at(state, eta_grid) for state in ordered]
    g = np.mean(estimates, axis=0)
    l2_mass = float(trapezoid(np.sum(g * g, axis=1), eta_grid))

    residuals = np.array([_radial_residual(state, eta_grid, g) for state in ordered])
    scaled = times * residuals
    spread = max(float(np.max(np.abs(estimate - g))) for estimate in estimates)
    logger.info(f"Radiation field from {len(ordered)} times in [{times[0]:.6g}, {times[-1]:.6g}]: "
                f"mass {l2_mass:.10g}, estimate spread {spread:.3e}")
    return RadiationField(eta_grid, g, l2_mass, times, residuals, scaled)
