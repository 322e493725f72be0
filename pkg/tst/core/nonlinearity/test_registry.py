import unittest

import numpy as np

from src.core.errors import MissingPotential, UnknownName
from src.core.nonlinearity.registry import builtin, list_builtins, resolve_nonlinearity


class TestRegistry(unittest.TestCase):

    def test_euclidean_2(self):
        nl = builtin("euclidean-2")
        self.assertEqual(nl.m, 2)
        u = np.array([0.3, -1.2])
        np.testing.assert_allclose(nl.eval(u), np.linalg.norm(u) ** 4 * u, rtol=1e-14)
        self.assertAlmostEqual(float(nl.energy_density(u)), np.linalg.norm(u) ** 6 / 6.0, places=12)

    def test_plain_euclidean_defaults_to_two_components(self):
        self.assertEqual(builtin("euclidean").m, 2)
        self.assertEqual(builtin("euclidean-3").m, 3)

    def test_euclidean_fixes_every_unit_vector(self):
        nl = builtin("euclidean-3")
        for omega in ([1.0, 0.0, 0.0], [0.0, 0.6, 0.8], np.ones(3) / np.sqrt(3.0)):
            np.testing.assert_allclose(nl.eval(omega), omega, atol=1e-15)

    def test_mixed_cubic(self):
        nl = builtin("mixed-cubic")
        u = np.array([1.0, 1.0])
        self.assertAlmostEqual(float(nl.energy_density(u)), 1.0 / 3.0)
        self.assertAlmostEqual(float(np.dot(u, nl.eval(u))), 6.0 * float(nl.energy_density(u)))
        np.testing.assert_allclose(nl.eval([2.0, 1.0]), [4.0, 8.0])

    def test_nonpotential_triangular_has_no_potential(self):
        nl = builtin("nonpotential-triangular")
        self.assertFalse(nl.has_potential)
        np.testing.assert_allclose(nl.eval([1.0, 2.0]), [1.0, 10.0])
        with self.assertRaises(MissingPotential):
            nl.energy_density([1.0, 2.0])

    def test_scalar_signs(self):
        self.assertAlmostEqual(float(builtin("scalar-focusing").eval(2.0)[0]), 32.0)
        self.assertAlmostEqual(float(builtin("scalar-defocusing").eval(2.0)[0]), -32.0)
        self.assertAlmostEqual(float(builtin("scalar-defocusing").energy_density(1.0)), -1.0 / 6.0)

    def test_linear_and_decoupled(self):
        linear = builtin("linear")
        self.assertEqual(linear.m, 1)
        np.testing.assert_array_equal(linear.eval([3.0]), [0.0])
        decoupled = builtin("decoupled-2")
        np.testing.assert_allclose(decoupled.eval([1.0, 2.0]), [1.0, 32.0])
        self.assertAlmostEqual(float(decoupled.energy_density([1.0, 2.0])), 65.0 / 6.0)

    def test_f_u5u1_is_gradient_of_its_potential(self):
        nl = builtin("f-u5u1")
        self.assertEqual(nl.m, 2)
        e1 = np.array([1.0, 0.0])
        self.assertAlmostEqual(float(nl.energy_density(e1)), 1.0 / 6.0)
        np.testing.assert_allclose(nl.eval(e1), [1.0, 0.0], atol=1e-15)

    def test_zero_maps_to_zero(self):
        for name in ("scalar-focusing", "euclidean-2", "mixed-cubic", "nonpotential-triangular", "f-u5u1"):
            nl = builtin(name)
            np.testing.assert_array_equal(nl.eval(np.zeros(nl.m)), np.zeros(nl.m))

    def test_unknown_name(self):
        with self.assertRaises(UnknownName) as context:
            builtin("cubic-focusing")
        self.assertIn("cubic-focusing", str(context.exception))
        with self.assertRaises(UnknownName):
            builtin("euclidean-0")

    def test_list_builtins(self):
        names = list_builtins()
        self.assertIn("scalar-focusing", names)
        self.assertIn("euclidean-m", names)

    def test_resolve_custom_potential_table(self):
        nl = resolve_nonlinearity({"custom": {"name": "cubic-pair", "m": 2,
                                              "potential": [{"powers": [3, 3], "coefficient": 1.0 / 3.0}]}})
        reference = builtin("mixed-cubic")
        u = np.array([[0.4, -1.3], [2.0, 0.5]])
        np.testing.assert_allclose(nl.eval(u), reference.eval(u), rtol=1e-14)
        np.testing.assert_allclose(nl.energy_density(u), reference.energy_density(u), rtol=1e-14)

    def test_resolve_requires_a_block(self):
        with self.assertRaises(ValueError):
            resolve_nonlinearity({})
        with self.assertRaises(ValueError):
            resolve_nonlinearity({"custom": {"name": "x", "m": 1}})


if __name__ == "__main__":
    unittest.main()
