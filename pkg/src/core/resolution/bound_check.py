import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.core.errors import NonpositiveEnergy
from src.core.evolution.energy_diagnostics import energy, norm_HH
from src.core.evolution.wave_state import WaveState
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity

logger = logging.getLogger(__name__)

BOUND_TOLERANCE = 1e-2


@dataclass(frozen=True, eq=False)
class ThreeEnergyBound:
    """
    Attributes:
        energy: E(u) at the first snapshot
        times: Snapshot times
        ratios: ||(u, u_t)||^2 / (3E) per snapshot
        max_ratio: Largest ratio over the run
        tail_ratio: Largest ratio over the second half of the run
    """

    energy: float
    times: np.ndarray
    ratios: np.ndarray
    max_ratio: float
    tail_ratio: float

    @property
    def flagged(self) -> bool:
        """Whether the tail exceeds 3E beyond the tolerance."""
        return self.tail_ratio > 1.0 + BOUND_TOLERANCE


def check_3E_bound(snapshots: Sequence[WaveState], nl: VectorNonlinearity) -> ThreeEnergyBound:
    """
    Compare ||(u, u_t)||^2_{H x L^2} with 3E(u) along a run.

    Raises:
        NonpositiveEnergy: If E <= 0
        MissingPotential: If nl has no potential
    """
    if not snapshots:
        raise ValueError("3E bound needs at least one snapshot")
    ordered = sorted(snapshots, key=lambda s: s.t)
    e = energy(nl, ordered[0])
    if e <= 0.0:
        raise NonpositiveEnergy(f"E = {e:.6g} <= 0: the 3E bound does not apply")

    times = np.array([s.t for s in ordered])
    ratios = np.array([norm_HH(s) for s in ordered]) / (3.0 * e)
    midpoint = times[0] + 0.5 * (times[-1] - times[0])
    tail = ratios[times >= midpoint]
    result = ThreeEnergyBound(e, times, ratios, float(np.max(ratios)), float(np.max(tail)))
    if result.flagged:
        logger.warning(f"Run exceeds the 3E bound: tail ratio {result.tail_ratio:.6g}")
    return result
