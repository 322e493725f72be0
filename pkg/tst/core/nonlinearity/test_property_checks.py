import unittest

import numpy as np

from src.core.errors import MissingPotential
from src.core.nonlinearity.property_checks import (
    check_homogeneity, check_potential_gradient, lipschitz_bound_fit, test_defocusing_direction,
)
from src.core.nonlinearity.registry import builtin
from src.core.nonlinearity.sphere_grid import sample_ball, sphere_grid

BUILTINS = ["scalar-focusing", "scalar-defocusing", "euclidean-2", "euclidean-3", "decoupled-2",
            "mixed-cubic", "nonpotential-triangular", "f-u5u1", "linear"]


class TestHomogeneity(unittest.TestCase):

    def test_every_builtin_is_homogeneous(self):
        for name in BUILTINS:
            with self.subTest(name=name):
                self.assertLess(check_homogeneity(builtin(name), 500, seed=1), 1e-12)

    def test_scalar_monomial_is_exact(self):
        self.assertLess(check_homogeneity(builtin("scalar-focusing"), 200, seed=0), 1e-14)

    def test_deterministic_given_seed(self):
        nl = builtin("f-u5u1")
        self.assertEqual(check_homogeneity(nl, 100, seed=3), check_homogeneity(nl, 100, seed=3))

    def test_samples_must_be_positive(self):
        with self.assertRaises(ValueError):
            check_homogeneity(builtin("scalar-focusing"), 0, seed=0)


class TestPotentialGradient(unittest.TestCase):

    def test_every_builtin_potential_matches_its_field(self):
        for name in BUILTINS:
            nl = builtin(name)
            if not nl.has_potential:
                continue
            with self.subTest(name=name):
                self.assertLess(check_potential_gradient(nl, 1e-5, 1000, seed=2), 1e-6)

    def test_missing_potential(self):
        with self.assertRaises(MissingPotential):
            check_potential_gradient(builtin("nonpotential-triangular"), 1e-5, 10, seed=0)

    def test_step_range(self):
        with self.assertRaises(ValueError):
            check_potential_gradient(builtin("scalar-focusing"), 0.1, 10, seed=0)


class TestLipschitzBound(unittest.TestCase):

    def test_scalar_quintic_bound(self):
        constant = lipschitz_bound_fit(builtin("scalar-focusing"), 2000, seed=0)
        self.assertGreater(constant, 0.0)
        self.assertLessEqual(constant, 5.0)

    def test_collinear_euclidean_matches_scalar(self):
        scalar = lipschitz_bound_fit(builtin("scalar-focusing"), 1000, seed=4)
        euclidean = lipschitz_bound_fit(builtin("euclidean-1"), 1000, seed=4)
        self.assertAlmostEqual(scalar, euclidean, places=9)

    def test_linear_gives_zero(self):
        self.assertEqual(lipschitz_bound_fit(builtin("linear"), 100, seed=0), 0.0)


class TestDefocusingDirection(unittest.TestCase):

    def test_mixed_cubic_antidiagonal(self):
        omega = np.array([1.0, -1.0]) / np.sqrt(2.0)
        report = test_defocusing_direction(builtin("mixed-cubic"), omega)
        self.assertTrue(report.verdict)
        self.assertEqual(report.max_violation, 0.0)

    def test_scalar_focusing_is_not_defocusing(self):
        report = test_defocusing_direction(builtin("scalar-focusing"), [1.0])
        self.assertFalse(report.verdict)
        self.assertAlmostEqual(report.max_violation, 1.0)

    def test_scalar_defocusing(self):
        self.assertTrue(test_defocusing_direction(builtin("scalar-defocusing"), [1.0]).verdict)

    def test_direction_must_be_unit(self):
        with self.assertRaises(ValueError):
            test_defocusing_direction(builtin("euclidean-2"), [1.0, 1.0])


class TestSphereGrid(unittest.TestCase):

    def test_points_are_unit_vectors(self):
        for m, count in ((2, 12), (3, 50), (5, 40)):
            points = sphere_grid(m, count, seed=1)
            self.assertEqual(points.shape, (count, m))
            np.testing.assert_allclose(np.linalg.norm(points, axis=1), 1.0, rtol=1e-14)

    def test_scalar_sphere(self):
        np.testing.assert_array_equal(sphere_grid(1, 99), [[1.0], [-1.0]])

    def test_ball_samples_stay_inside(self):
        points = sample_ball(np.random.default_rng(0), 500, 3, radius=10.0)
        self.assertLessEqual(float(np.max(np.linalg.norm(points, axis=1))), 10.0 + 1e-12)


if __name__ == "__main__":
    unittest.main()
