import unittest

import numpy as np

from src.core.nonlinearity.registry import builtin
from src.core.stationary import radial_quadrature
from src.core.stationary.diagnostics import stationarity_residual
from src.core.stationary.explicit_family import default_grid, explicit_W, explicit_Y, w_charge
from src.core.stationary.radial_profile import RadialProfile

# int |W'|^2 r^2 dr for the unit bubble
GRADIENT_ENERGY_W = 3.0 * np.sqrt(3.0) * np.pi / 16.0


class TestExplicitFamily(unittest.TestCase):

    def setUp(self):
        self.nl = builtin("scalar-focusing")
        self.grid = default_grid()
        self.w = explicit_W(1.0, self.grid)

    def test_point_values(self):
        w = explicit_W(1.0, [0.0, 3.0])
        np.testing.assert_allclose(w.values[:, 0], [1.0, 0.5])
        self.assertEqual(float(w.derivs[0, 0]), 0.0)
        self.assertTrue(w.regular_at_origin)

    def test_default_grid(self):
        self.assertEqual(self.grid[0], 0.0)
        self.assertAlmostEqual(self.grid[1], 1e-4)
        self.assertAlmostEqual(self.grid[-1], 1e4)
        self.assertTrue(np.all(np.diff(self.grid) > 0.0))

    def test_charge(self):
        self.assertAlmostEqual(w_charge(1.0), np.sqrt(3.0))
        far = explicit_W(4.0, [1.0, 1e6])
        self.assertAlmostEqual(float(far.asymptotic_charge()[0]), w_charge(4.0), places=9)

    def test_y_is_scaling_derivative(self):
        y = explicit_Y(1.0, self.grid)
        reference = self.grid * self.w.derivs[:, 0] + 0.5 * self.w.values[:, 0]
        np.testing.assert_allclose(y.values[:, 0], reference, rtol=1e-12, atol=1e-15)
        self.assertAlmostEqual(float(explicit_Y(1.0, [0.0, np.sqrt(3.0)]).values[1, 0]), 0.0, places=15)

    def test_invalid_scale(self):
        with self.assertRaises(ValueError):
            explicit_W(0.0, self.grid)
        with self.assertRaises(ValueError):
            explicit_Y(-1.0, self.grid)

    def test_w_is_stationary(self):
        dense = explicit_W(1.0, default_grid(r_max=1e3, points_per_decade=256, r_min=1e-3))
        self.assertLess(stationarity_residual(self.nl, dense), 1e-8)

    def test_triangular_pair_is_stationary(self):
        grid = default_grid(r_max=1e3, points_per_decade=256, r_min=1e-3)
        w, y = explicit_W(1.0, grid), explicit_Y(1.0, grid)
        pair = RadialProfile(grid, np.hstack([w.values, 0.5 * y.values]), np.hstack([w.derivs, 0.5 * y.derivs]),
                             regular_at_origin=True)
        self.assertLess(stationarity_residual(builtin("nonpotential-triangular"), pair), 1e-6)

    def test_twice_w_is_not_stationary(self):
        doubled = explicit_W(1.0, default_grid(r_max=1e3, points_per_decade=256, r_min=1e-3)).times(2.0)
        self.assertGreater(stationarity_residual(self.nl, doubled), 1e-2)

    def test_energies(self):
        self.assertAlmostEqual(radial_quadrature.gradient_energy(self.w) / GRADIENT_ENERGY_W, 1.0, delta=1e-5)
        self.assertAlmostEqual(radial_quadrature.sextic_mass(self.w) / GRADIENT_ENERGY_W, 1.0, delta=1e-5)
        energy = radial_quadrature.stationary_energy(self.nl, self.w)
        self.assertAlmostEqual(energy / (GRADIENT_ENERGY_W / 3.0), 1.0, delta=1e-5)

    def test_energy_is_scale_invariant(self):
        e1 = radial_quadrature.stationary_energy(self.nl, self.w)
        e2 = radial_quadrature.stationary_energy(self.nl, self.w.rescaled(7.0))
        self.assertAlmostEqual(e1, e2, places=12)


class TestRadialQuadrature(unittest.TestCase):

    def setUp(self):
        self.w = explicit_W(1.0, default_grid())

    def test_polynomial_integrand_is_exact(self):
        # u = r on [1, 2]: int |u'|^2 r^2 dr = 7/3
        grid = np.linspace(1.0, 2.0, 5)
        profile = RadialProfile(grid, grid, np.ones_like(grid))
        self.assertAlmostEqual(radial_quadrature.gradient_energy(profile, with_tail=False), 7.0 / 3.0, places=13)

    def test_cumulative_energy_reaches_total(self):
        total = radial_quadrature.gradient_energy(self.w)
        inside = radial_quadrature.cumulative_gradient_energy(self.w, self.w.r_max)
        tail = 3.0 / self.w.r_max
        self.assertAlmostEqual(inside + tail, total, delta=1e-8)

    def test_half_energy_radius(self):
        total = radial_quadrature.gradient_energy(self.w)
        radius = radial_quadrature.half_energy_radius(self.w, 0.5, total)
        self.assertAlmostEqual(radial_quadrature.cumulative_gradient_energy(self.w, radius), 0.5 * total, delta=1e-10)
        self.assertGreater(radius, 5.0)
        self.assertLess(radius, 5.7)

    def test_half_energy_radius_in_the_tail(self):
        # Only the grid [0, 2] is stored; the fraction reaches into the 1/r tail
        short = explicit_W(1.0, np.linspace(0.0, 2.0, 201))
        radius = radial_quadrature.half_energy_radius(short, 0.9)
        self.assertGreater(radius, 2.0)
        self.assertTrue(np.isfinite(radius))


if __name__ == "__main__":
    unittest.main()
