import unittest

import numpy as np

from src.core.evolution.energy_diagnostics import norm_HH
from src.core.evolution.initial_data import Bubble, bubble_state
from src.core.nonlinearity.registry import builtin
from src.core.resolution.profile_fitting import (
    DEFAULT_DIRECTIONS, CandidateLibrary, Match, ResolutionReport, annuli, energy_budget, fit_profiles,
)
from src.core.resolution.scale_detection import detect_scales
from src.core.stationary.diagnostics import K_normalize
from src.core.stationary.explicit_family import default_grid, explicit_W

ENERGY_W = np.sqrt(3.0) * np.pi / 16.0


class TestCandidateLibrary(unittest.TestCase):

    def test_scalar_library(self):
        library = CandidateLibrary.builtin(builtin("scalar-focusing"))
        self.assertEqual([c.name for c in library], ["ground_state", "-ground_state"])
        for energy in library.energies():
            self.assertAlmostEqual(energy / ENERGY_W, 1.0, delta=1e-5)

    def test_euclidean_library_has_every_direction(self):
        library = CandidateLibrary.builtin(builtin("euclidean-2"))
        self.assertEqual(len(library), 2 + DEFAULT_DIRECTIONS)

    def test_candidates_are_K_normalized(self):
        library = CandidateLibrary.builtin(builtin("scalar-focusing"))
        _, lam = K_normalize(library.candidates[0].profile)
        self.assertAlmostEqual(lam, 1.0, places=6)

    def test_register_checks_components(self):
        library = CandidateLibrary(builtin("euclidean-2"))
        with self.assertRaises(ValueError):
            library.register("scalar", explicit_W(1.0, default_grid()))

    def test_nonpotential_library_has_no_energies(self):
        library = CandidateLibrary(builtin("nonpotential-triangular"))
        library.register("e1", explicit_W(1.0, default_grid()).embed([1.0, 0.0]))
        self.assertEqual(library.energies(), [])
        self.assertIsNone(library.candidates[0].energy)


class TestProfileFitting(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.nl = builtin("scalar-focusing")
        cls.library = CandidateLibrary.builtin(cls.nl)
        _, cls.lam_K = K_normalize(explicit_W(1.0, default_grid()))

    def test_annuli(self):
        self.assertEqual(annuli([1.0, 100.0], 1000.0), [(0.0, 10.0), (10.0, 1000.0)])
        self.assertEqual(annuli([1.0], 50.0), [(0.0, 50.0)])

    def test_two_separated_bubbles(self):
        state = bubble_state(self.nl, 20001, 20.0, [Bubble(0.01), Bubble(1.0)]).with_time(50.0)
        scales = detect_scales(state, [ENERGY_W, ENERGY_W])
        report = fit_profiles(state, scales, self.library)
        self.assertEqual(report.J, 2)
        self.assertEqual([m.candidate for m in report.matches], ["ground_state", "ground_state"])
        self.assertAlmostEqual(report.matches[0].lam * self.lam_K / 0.01, 1.0, delta=0.05)
        self.assertAlmostEqual(report.matches[1].lam * self.lam_K, 1.0, delta=0.05)
        self.assertLess(report.residual_energy, 0.05 * norm_HH(state))

        budget = energy_budget(report, 2.0 * ENERGY_W)
        self.assertLess(budget, 1e-3)

    def test_negative_bubble(self):
        state = bubble_state(self.nl, 4001, 40.0, [Bubble(1.0, sign=-1.0)]).with_time(50.0)
        report = fit_profiles(state, detect_scales(state, [ENERGY_W]), self.library)
        self.assertEqual(report.matches[0].candidate, "-ground_state")
        self.assertAlmostEqual(report.matches[0].lam * self.lam_K, 1.0, delta=1e-3)
        self.assertLess(report.matches[0].residual, 1e-2)

    def test_euclidean_direction_is_recovered(self):
        nl = builtin("euclidean-2")
        library = CandidateLibrary.builtin(nl)
        omega = np.array([np.cos(0.3), np.sin(0.3)])
        state = bubble_state(nl, 4001, 40.0, [Bubble(1.0, direction=omega)]).with_time(50.0)
        report = fit_profiles(state, detect_scales(state, [ENERGY_W]), library)
        matched = next(c for c in library if c.name == report.matches[0].candidate)
        direction = matched.profile.values[0] / np.linalg.norm(matched.profile.values[0])
        angle = np.degrees(np.arccos(np.clip(direction @ omega, -1.0, 1.0)))
        self.assertLess(angle, 5.0)
        self.assertAlmostEqual(report.matches[0].lam * self.lam_K, 1.0, delta=0.05)

    def test_no_scales(self):
        state = bubble_state(self.nl, 2001, 20.0, [Bubble(1.0)])
        report = fit_profiles(state, [], self.library, radiation_mass=0.25)
        self.assertEqual(report.J, 0)
        self.assertEqual(report.matches, [])
        self.assertEqual(report.radiation_mass, 0.25)
        self.assertAlmostEqual(report.residual_energy, norm_HH(state))

    def test_energy_budget(self):
        report = ResolutionReport(t=1.0, J=2, scales=[1.0, 10.0], radiation_mass=0.5,
                                  matches=[Match("a", 1.0, 0.0, 1.0), Match("b", 10.0, 0.0, None)])
        self.assertAlmostEqual(energy_budget(report, 2.0), 0.5)


if __name__ == "__main__":
    unittest.main()
