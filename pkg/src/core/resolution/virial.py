"""
The localized virial functional y(t) = int phi(r / t) |u|^2 r^2 dr along a run.

Away from the cutoff region y'' = 8 ||u_t||^2 + 4 ||grad u||^2 - 12 E(u), which is
the convexity mechanism behind blow-up for negative energy.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

from src.core.errors import InsufficientSnapshots
from src.core.evolution.energy_diagnostics import energy, gradient_norm_sq, kinetic_norm_sq
from src.core.evolution.wave_state import WaveState
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity

logger = logging.getLogger(__name__)

CADENCE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class VirialSeries:
    """
    Attributes:
        times: Snapshot times, increasing and uniformly spaced
        y: Localized virial functional
        ypp_measured: Central second differences of y (NaN at both ends)
        ypp_predicted: 8 ||u_t||^2 + 4 ||grad u||^2 - 12 E(u) per snapshot
    """

    times: np.ndarray
    y: np.ndarray
    ypp_measured: np.ndarray
    ypp_predicted: np.ndarray


def cutoff(s):
    """1 on [0, 2], 0 on [3, inf), joined by the quintic smoothstep."""
    s = np.asarray(s, dtype=float)
    x = np.clip(s - 2.0, 0.0, 1.0)
    return 1.0 - x ** 3 * (10.0 - 15.0 * x + 6.0 * x ** 2)


def virial_functional(state: WaveState) -> float:
    if state.t <= 0.0:
        raise ValueError(f"Virial cutoff needs t > 0, got t = {state.t}")
    r = state.grid
    density = cutoff(r / state.t) * np.sum(state.u * state.u, axis=1) * r ** 2
    return float(trapezoid(density, dx=state.dr))


def virial_prediction(nl: VectorNonlinearity, state: WaveState) -> float:
    """8 ||u_t||^2 + 4 ||grad u||^2 - 12 E(u)."""
    return 8.0 * kinetic_norm_sq(state) + 4.0 * gradient_norm_sq(state) - 12.0 * energy(nl, state)


def virial_series(snapshots: Sequence[WaveState], nl: VectorNonlinearity) -> VirialSeries:
    """
    Localized virial functional along a run.

    Snapshots at t <= 0 are skipped, the cutoff being defined through r / t.

    Raises:
        InsufficientSnapshots: If fewer than three snapshots with t > 0 remain
        ValueError: If the snapshot times are not uniformly spaced
        MissingPotential: If nl has no potential
    """
    usable = sorted((s for s in snapshots if s.t > 0.0), key=lambda s: s.t)
    skipped = len(snapshots) - len(usable)
    if skipped:
        logger.debug(f"Virial series skips {skipped} snapshot(s) at t <= 0")
    if len(usable) < 3:
        raise InsufficientSnapshots(f"Virial series needs three snapshots with t > 0, got {len(usable)}")

    times = np.array([s.t for s in usable])
    steps = np.diff(times)
    if np.max(np.abs(steps - steps[0])) > CADENCE_RTOL * max(1.0, abs(steps[0])) * len(steps):
        raise ValueError("Virial series needs uniformly spaced snapshot times")

    y = np.array([virial_functional(s) for s in usable])
    measured = np.full(y.size, np.nan)
    measured[1:-1] = (y[2:] - 2.0 * y[1:-1] + y[:-2]) / steps[0] ** 2
    predicted = np.array([virial_prediction(nl, s) for s in usable])
    return VirialSeries(times, y, measured, predicted)
