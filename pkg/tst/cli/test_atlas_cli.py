import unittest

import numpy as np

from src.cli.atlas_cli import AtlasRunner
from src.core.nonlinearity.registry import builtin
from src.core.nonlinearity.sphere_grid import sphere_grid
from src.core.stationary.inward_continuation import ZCase


class TestBuildAtlas(unittest.TestCase):

    def setUp(self):
        self.runner = AtlasRunner()

    def test_defocusing_has_no_finite_energy_solution(self):
        charges = np.array([[-2.0], [-1.0], [-0.5], [0.5], [1.0], [2.0]])
        frame = self.runner.build_atlas(builtin("scalar-defocusing"), charges, jobs=2)
        self.assertEqual(list(frame["case"]), [ZCase.A_BLOWUP.value] * len(charges))
        self.assertTrue((frame["R_theta"] > 0.0).all())

    def test_euclidean_solutions_are_rescaled_bubbles(self):
        directions = sphere_grid(2, 8)
        charges = np.vstack([radius * directions for radius in (0.5, 1.0, 2.0)])
        frame = self.runner.build_atlas(builtin("euclidean-2"), charges, jobs=4)
        self.assertEqual(list(frame["case"]), [ZCase.C_ENERGY.value] * len(charges))
        self.assertLess(float(frame["w_fit_residual"].max()), 1e-4)
        # zeta W_(lambda) carries charge sqrt(3 lambda) with |zeta| = 1
        np.testing.assert_allclose(frame["w_fit_lam"], frame["theta_norm"] ** 2 / 3.0, rtol=1e-4)


if __name__ == "__main__":
    unittest.main()
