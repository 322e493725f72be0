import unittest

import numpy as np

from src.core.errors import DomainError
from src.core.stationary.explicit_family import explicit_W
from src.core.stationary.kelvin import kelvin_transform
from src.core.stationary.radial_profile import RadialProfile


class TestRadialProfile(unittest.TestCase):

    def setUp(self):
        self.grid = np.array([1.0, 2.0, 3.0])
        self.cubic = RadialProfile(self.grid, self.grid ** 3, 3.0 * self.grid ** 2)

    def test_hermite_interpolation_reproduces_cubics(self):
        self.assertAlmostEqual(float(self.cubic.evaluate(1.5)[0]), 3.375, places=12)
        self.assertAlmostEqual(float(self.cubic.derivative(2.5)[0]), 18.75, places=12)

    def test_shapes(self):
        self.assertEqual(self.cubic.m, 1)
        self.assertEqual(self.cubic.n, 3)
        self.assertEqual(self.cubic.evaluate(np.array([1.0, 2.5])).shape, (2, 1))

    def test_outside_domain(self):
        with self.assertRaises(DomainError):
            self.cubic.evaluate(0.5)
        with self.assertRaises(DomainError):
            self.cubic.evaluate(3.5)

    def test_invalid_grids(self):
        with self.assertRaises(ValueError):
            RadialProfile([1.0, 1.0, 2.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0])
        with self.assertRaises(ValueError):
            RadialProfile([0.0, 1.0], [1.0, 0.5], [0.0, -0.5])
        with self.assertRaises(ValueError):
            RadialProfile([1.0, 2.0], [1.0, 0.5, 0.1], [0.0, -0.5, 0.0])

    def test_origin_derivative_is_zeroed(self):
        profile = RadialProfile([0.0, 1.0], [1.0, 0.5], [3.0, -0.5], regular_at_origin=True)
        self.assertEqual(float(profile.derivs[0, 0]), 0.0)

    def test_arrays_are_read_only(self):
        with self.assertRaises(ValueError):
            self.cubic.values[0, 0] = 5.0

    def test_rescaled_matches_closed_form(self):
        grid = np.concatenate([[0.0], np.geomspace(1e-2, 1e2, 50)])
        rescaled = explicit_W(1.0, grid).rescaled(2.0)
        direct = explicit_W(2.0, 2.0 * grid)
        np.testing.assert_allclose(rescaled.values, direct.values, rtol=1e-14)
        np.testing.assert_allclose(rescaled.derivs, direct.derivs, rtol=1e-14, atol=1e-300)

    def test_tail_extension(self):
        profile = explicit_W(1.0, np.geomspace(1.0, 1e4, 100))
        charge = profile.asymptotic_charge()
        np.testing.assert_allclose(profile.evaluate_extended([2e4]), [charge / 2e4])
        np.testing.assert_allclose(profile.derivative_extended([2e4]), [-charge / 4e8])
        np.testing.assert_allclose(profile.evaluate_extended([2.0]), profile.evaluate([2.0]))

    def test_embed_and_times(self):
        scalar = explicit_W(1.0, [0.0, 1.0, 2.0])
        vector = scalar.embed([0.6, 0.8])
        self.assertEqual(vector.m, 2)
        np.testing.assert_allclose(vector.values[:, 1], 0.8 * scalar.values[:, 0])
        np.testing.assert_allclose(vector.times(2.0).values, 2.0 * vector.values)
        with self.assertRaises(ValueError):
            vector.embed([1.0, 0.0])

    def test_restrict(self):
        profile = explicit_W(1.0, np.linspace(0.0, 10.0, 11))
        inner = profile.restrict(2.0, 5.0)
        np.testing.assert_array_equal(inner.grid, [2.0, 3.0, 4.0, 5.0])
        with self.assertRaises(DomainError):
            profile.restrict(2.2, 2.8)


class TestKelvinTransform(unittest.TestCase):

    def setUp(self):
        self.grid = np.geomspace(1e-2, 1e2, 200)

    def test_w_maps_to_its_rescaling(self):
        # (1/r) W(1/r) = W_(1/3)(r)
        inverted = kelvin_transform(explicit_W(1.0, self.grid))
        reference = explicit_W(1.0 / 3.0, inverted.grid)
        np.testing.assert_allclose(inverted.values, reference.values, rtol=1e-12)
        np.testing.assert_allclose(inverted.derivs, reference.derivs, rtol=1e-10)

    def test_involution_on_nodes(self):
        profile = explicit_W(2.0, self.grid).embed([0.6, -0.8])
        twice = kelvin_transform(kelvin_transform(profile))
        np.testing.assert_allclose(twice.grid, profile.grid, rtol=1e-14)
        np.testing.assert_allclose(twice.values, profile.values, rtol=1e-13)
        np.testing.assert_allclose(twice.derivs, profile.derivs, rtol=1e-9)

    def test_profile_through_origin(self):
        with self.assertRaises(DomainError):
            kelvin_transform(explicit_W(1.0, [0.0, 1.0, 2.0]))


if __name__ == "__main__":
    unittest.main()
