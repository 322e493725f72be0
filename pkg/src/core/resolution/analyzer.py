"""
End-to-end resolution of a run at its latest snapshot.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from src.core.errors import EnergyBudgetExceeded
from src.core.evolution.energy_diagnostics import gradient_norm_sq
from src.core.evolution.wave_state import WaveState
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.radiation.radiation_field import RadiationField, extract_radiation
from src.core.resolution.profile_fitting import CandidateLibrary, ResolutionReport, energy_budget, fit_profiles
from src.core.resolution.scale_detection import detect_scales

logger = logging.getLogger(__name__)


class ResolutionAnalyzer:
    """
    Decomposes the latest snapshot of a run into radiation and rescaled bubbles.

    The outgoing radiation is estimated from the late snapshots and rebuilt as the
    free wave w = H(t - r) with H' = g; its difference with the solution is searched
    for bubbles from the candidate library.

    Args:
        nl: Nonlinearity of the run
        library: Candidate profiles (defaults to the builtin library of nl)
        window: Number of late snapshots used for the radiation estimate
        eps: Tolerance of the scale detection
    """

    def __init__(self, nl: VectorNonlinearity, library: Optional[CandidateLibrary] = None,
                 window: int = 3, eps: float = 1e-10):
        self.nl = nl
        self.library = library if library is not None else CandidateLibrary.builtin(nl)
        self.window = window
        self.eps = eps
        self.logger = logging.getLogger(__name__)

    def infer_energies(self, diff: WaveState) -> List[float]:
        """
        Bubble energies compatible with the gradient energy of diff.

        Each bubble Q carries ||grad Q||^2 = 3E(Q); the count is taken with the smallest
        energy in the library.
        """
        energies = self.library.energies()
        if not energies:
            return []
        smallest = min(e for e in energies if e > 0.0)
        count = int(np.floor(gradient_norm_sq(diff) / (3.0 * smallest) + 0.5))
        return [smallest] * count

    def radiation(self, snapshots: Sequence[WaveState]) -> RadiationField:
        late = sorted(snapshots, key=lambda s: s.t)[-max(self.window, 2):]
        return extract_radiation(late)

    def analyze(self, snapshots: Sequence[WaveState], E_total: Optional[float] = None,
                energies: Optional[Sequence[float]] = None) -> ResolutionReport:
        """
        Resolve the latest snapshot.

        Args:
            snapshots: Snapshots of the run (at least two)
            E_total: Energy of the run, for the budget gap
            energies: Bubble energies to look for; inferred when omitted

        Returns:
            ResolutionReport at the latest time
        """
        radiation_field = self.radiation(snapshots)
        latest = max(snapshots, key=lambda s: s.t)
        free = radiation_field.outgoing_state(latest.t, latest.dr, latest.nr)
        diff = latest - free

        if energies is None:
            energies = self.infer_energies(diff)
        try:
            scales = detect_scales(diff, energies, self.eps)
        except EnergyBudgetExceeded as error:
            self.logger.warning(f"Scale detection stopped at j = {error.j}: {error}")
            scales = error.scales

        report = fit_profiles(diff, scales, self.library, radiation_mass=radiation_field.l2_mass)
        if E_total is not None:
            report.budget_gap = energy_budget(report, E_total)
        self.logger.info(f"Resolution at t = {latest.t:.6g}: J = {report.J}, "
                         f"radiation mass {radiation_field.l2_mass:.6g}, "
                         f"budget gap {report.budget_gap}")
        return report
