import unittest

import numpy as np

from src.core.nonlinearity.polynomial import from_field_table, from_potential_table


class TestPolynomialTables(unittest.TestCase):

    def test_gradient_field_gets_a_potential(self):
        nl = from_field_table("quintic", 1, [{"powers": [5], "coefficients": [1.0]}])
        self.assertTrue(nl.has_potential)
        self.assertAlmostEqual(float(nl.energy_density([2.0])), 64.0 / 6.0)

    def test_non_gradient_field_has_no_potential(self):
        nl = from_field_table("triangular", 2, [
            {"powers": [5, 0], "coefficients": [1.0, 0.0]},
            {"powers": [4, 1], "coefficients": [0.0, 5.0]},
        ])
        self.assertFalse(nl.has_potential)
        np.testing.assert_allclose(nl.eval([1.0, 2.0]), [1.0, 10.0])

    def test_repeated_monomials_add_up(self):
        nl = from_field_table("doubled", 1, [
            {"powers": [5], "coefficients": [1.0]},
            {"powers": [5], "coefficients": [2.0]},
        ])
        self.assertAlmostEqual(float(nl.eval([1.0])[0]), 3.0)

    def test_potential_table_is_differentiated_exactly(self):
        nl = from_potential_table("euclidean-like", 2, [
            {"powers": [6, 0], "coefficient": 1.0 / 6.0},
            {"powers": [4, 2], "coefficient": 0.5},
            {"powers": [2, 4], "coefficient": 0.5},
            {"powers": [0, 6], "coefficient": 1.0 / 6.0},
        ])
        u = np.array([0.7, -0.4])
        np.testing.assert_allclose(nl.eval(u), np.linalg.norm(u) ** 4 * u, rtol=1e-13)

    def test_wrong_degree_is_rejected(self):
        with self.assertRaises(ValueError):
            from_field_table("bad", 2, [{"powers": [2, 2], "coefficients": [1.0, 0.0]}])
        with self.assertRaises(ValueError):
            from_potential_table("bad", 1, [{"powers": [5], "coefficient": 1.0}])

    def test_wrong_sizes_are_rejected(self):
        with self.assertRaises(ValueError):
            from_field_table("bad", 2, [{"powers": [5], "coefficients": [1.0, 0.0]}])
        with self.assertRaises(ValueError):
            from_field_table("bad", 2, [{"powers": [5, 0], "coefficients": [1.0]}])


if __name__ == "__main__":
    unittest.main()
