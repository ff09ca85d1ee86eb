"""
Unit tests for the periodic mesh, quintic B-spline transfers and Poisson solver
"""

import math
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from erpic.mesh import (Grid2D, ScalarField, VectorField2D, ParticleEnsemble, bspline_weights,
                        deposit_density, deposit_weights, interpolate_field, interpolate_scalar,
                        solve_poisson, spectral_divergence, field_energy)


def cardinal_bspline(t, degree):
    """Cardinal B-spline of the given degree on [0, degree + 1] by the Cox-de Boor recursion"""
    if degree == 0:
        return 1.0 if 0.0 <= t < 1.0 else 0.0
    return (t * cardinal_bspline(t, degree - 1)
            + (degree + 1 - t) * cardinal_bspline(t - 1.0, degree - 1)) / degree


class TestGrid2D(unittest.TestCase):
    """Test cases for Grid2D and node fields"""

    def setUp(self):
        """Set up test fixtures"""
        self.grid = Grid2D(16, 8, 0.0, 4.0 * math.pi, 0.0, 2.0 * math.pi)

    def test_spacing_and_area(self):
        """Test cell sizes follow from the bounds"""
        self.assertAlmostEqual(self.grid.dx, math.pi / 4.0)
        self.assertAlmostEqual(self.grid.dy, math.pi / 4.0)
        self.assertEqual(self.grid.shape, (16, 8))

    def test_too_few_cells_rejected(self):
        """Test grids narrower than the stencil are rejected"""
        with self.assertRaises(ValueError):
            Grid2D(4, 8, 0.0, 1.0, 0.0, 1.0)

    def test_wrap_into_box(self):
        """Test wrap maps positions onto their periodic representative"""
        pts = np.array([[-0.5, 7.0], [4.0 * math.pi + 1.0, -2.0 * math.pi], [1.0, 1.0]])
        wrapped = self.grid.wrap(pts)
        self.assertTrue(np.all(wrapped[:, 0] >= 0.0) and np.all(wrapped[:, 0] < 4.0 * math.pi))
        self.assertTrue(np.all(wrapped[:, 1] >= 0.0) and np.all(wrapped[:, 1] < 2.0 * math.pi))
        np.testing.assert_allclose(wrapped[2], [1.0, 1.0])
        self.assertAlmostEqual(wrapped[0, 0], 4.0 * math.pi - 0.5)

    def test_field_shape_checked(self):
        """Test fields reject arrays of the wrong shape"""
        with self.assertRaises(ValueError):
            ScalarField(self.grid, np.zeros((8, 16)))


class TestBSplineWeights(unittest.TestCase):
    """Test cases for the quintic shape function"""

    def test_weights_at_node(self):
        """Test the weights of a particle sitting on a node"""
        w = bspline_weights(0.0)
        np.testing.assert_allclose(w, np.array([1.0, 26.0, 66.0, 26.0, 1.0, 0.0]) / 120.0, atol=1e-15)

    def test_symmetric_at_half(self):
        """Test the weights at s = 1/2 are symmetric about the centre pair"""
        w = bspline_weights(0.5)
        np.testing.assert_allclose(w, w[::-1], atol=1e-15)

    def test_matches_cox_de_boor(self):
        """Test the weights at s = 1/4 against the recursive B-spline evaluation"""
        s = 0.25
        expected = [cardinal_bspline(s - offset + 3.0, 5) for offset in range(-2, 4)]
        np.testing.assert_allclose(bspline_weights(s), expected, rtol=1e-13, atol=1e-16)
        np.testing.assert_allclose(bspline_weights(0.0), [cardinal_bspline(3.0 - j, 5) for j in range(-2, 4)],
                                   atol=1e-15)

    def test_invalid_offset(self):
        """Test offsets outside [0, 1) are rejected"""
        for s in (-0.1, 1.0, float('nan')):
            with self.assertRaises(ValueError):
                bspline_weights(s)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=0.0, max_value=1.0, exclude_max=True))
    def test_partition_of_unity(self, s):
        """Test the weights are non-negative, sum to one and have zero first moment"""
        w = bspline_weights(s)
        self.assertTrue(np.all(w >= -1e-16))
        self.assertAlmostEqual(float(np.sum(w)), 1.0, places=14)
        offsets = np.arange(-2, 4)
        self.assertAlmostEqual(float(np.sum(w * (offsets - s))), 0.0, places=13)


class TestDeposition(unittest.TestCase):
    """Test cases for deposition and interpolation"""

    def setUp(self):
        """Set up test fixtures"""
        self.grid = Grid2D(16, 12, 0.0, 2.0 * math.pi, -1.0, 2.0)
        rng = np.random.default_rng(7)
        n = 500
        pos = np.column_stack([rng.uniform(0.0, 2.0 * math.pi, n), rng.uniform(-1.0, 2.0, n)])
        self.ensemble = ParticleEnsemble.uniform(pos, rng.normal(size=(n, 2)), 3.0)

    def test_mass_conservation(self):
        """Test dx*dy*sum(rho) equals the total weight"""
        rho = deposit_density(self.ensemble, self.grid)
        self.assertAlmostEqual(rho.integral(), 3.0, places=12)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=-50.0, max_value=50.0), st.floats(min_value=-50.0, max_value=50.0))
    def test_single_particle_mass(self, x, y):
        """Test a single particle anywhere deposits its full weight"""
        pos = self.grid.wrap(np.array([[x, y]]))
        rho = deposit_weights(pos, np.array([0.25]), self.grid)
        self.assertAlmostEqual(self.grid.cell_area * float(np.sum(rho)), 0.25, places=13)

    def test_periodic_images_deposit_identically(self):
        """Test shifting all particles by a period leaves the deposit unchanged"""
        rho = deposit_weights(self.ensemble.positions, self.ensemble.weights, self.grid)
        shifted = self.grid.wrap(self.ensemble.positions + np.array([self.grid.lx, -self.grid.ly]))
        rho_shifted = deposit_weights(shifted, self.ensemble.weights, self.grid)
        np.testing.assert_allclose(rho, rho_shifted, rtol=1e-10, atol=1e-12)

    def test_deposit_interpolate_adjoint(self):
        """Test sum(rho*phi)*dx*dy equals sum(w*phi(x_k)) for the shared kernel"""
        rng = np.random.default_rng(11)
        phi = ScalarField(self.grid, rng.normal(size=self.grid.shape))
        rho = deposit_density(self.ensemble, self.grid)
        lhs = self.grid.cell_area * float(np.sum(rho.values * phi.values))
        rhs = float(np.sum(self.ensemble.weights * interpolate_scalar(phi, self.ensemble.positions)))
        self.assertAlmostEqual(lhs, rhs, places=10)

    def test_interpolate_constant_field(self):
        """Test a constant field is interpolated exactly"""
        E = VectorField2D(self.grid, np.full(self.grid.shape, 2.0), np.full(self.grid.shape, -1.0))
        values = interpolate_field(E, self.ensemble.positions)
        np.testing.assert_allclose(values, np.tile([2.0, -1.0], (self.ensemble.n_p, 1)), atol=1e-13)

    def test_interpolate_single_point_shape(self):
        """Test a single position gives a single 2-vector"""
        E = VectorField2D.zeros(self.grid)
        self.assertEqual(interpolate_field(E, np.array([1.0, 0.5])).shape, (2,))

    def test_interpolate_smooth_field(self):
        """Test interpolation of a resolved mode is accurate to the kernel smoothing"""
        grid = Grid2D(64, 64, 0.0, 2.0 * math.pi, 0.0, 2.0 * math.pi)
        X, Y = grid.nodes()
        field = ScalarField(grid, np.cos(X))
        pts = np.array([[0.3, 1.0], [2.0, 4.0], [5.5, 0.1]])
        np.testing.assert_allclose(interpolate_scalar(field, pts), np.cos(pts[:, 0]), atol=1e-2)

    def test_rejects_3d_velocities(self):
        """Test deposition requires a 2D ensemble"""
        ens = ParticleEnsemble.uniform(np.zeros((2, 2)), np.zeros((2, 3)), 1.0)
        with self.assertRaises(ValueError):
            deposit_density(ens, self.grid)


class TestTranslationEquivariance(unittest.TestCase):
    """Whole-cell shifts of the particles shift the grid quantities by the same cells"""

    def setUp(self):
        """Set up test fixtures"""
        self.grid = Grid2D(16, 16, 0.0, 16.0, 0.0, 16.0)
        rng = np.random.default_rng(21)
        n = 300
        self.positions = rng.integers(0, 128, size=(n, 2)) / 8.0
        self.weights = rng.integers(1, 8, size=n) / 8.0
        self.shift = (3, 5)
        self.shifted = self.grid.wrap(self.positions + np.array(self.shift, dtype=float))

    def test_deposit_rolls_bitwise(self):
        """Test deposit(x + shift) equals np.roll(deposit(x), shift) bit for bit"""
        rho = deposit_weights(self.positions, self.weights, self.grid)
        rho_shifted = deposit_weights(self.shifted, self.weights, self.grid)
        np.testing.assert_array_equal(rho_shifted, np.roll(rho, self.shift, axis=(0, 1)))

    def test_interpolation_rolls_bitwise(self):
        """Test interpolating a rolled field at shifted positions reproduces the original values"""
        rng = np.random.default_rng(22)
        E = VectorField2D(self.grid, rng.normal(size=self.grid.shape), rng.normal(size=self.grid.shape))
        rolled = VectorField2D(self.grid, np.roll(E.e1, self.shift, axis=(0, 1)),
                               np.roll(E.e2, self.shift, axis=(0, 1)))
        np.testing.assert_array_equal(interpolate_field(rolled, self.shifted), interpolate_field(E, self.positions))

    def test_field_rolls(self):
        """Test the Poisson field of the shifted particles is the rolled field"""
        E = solve_poisson(ScalarField(self.grid, deposit_weights(self.positions, self.weights, self.grid)))
        E_shifted = solve_poisson(ScalarField(self.grid, deposit_weights(self.shifted, self.weights, self.grid)))
        np.testing.assert_allclose(E_shifted.e1, np.roll(E.e1, self.shift, axis=(0, 1)), atol=1e-12)
        np.testing.assert_allclose(E_shifted.e2, np.roll(E.e2, self.shift, axis=(0, 1)), atol=1e-12)


class TestPoisson(unittest.TestCase):
    """Test cases for the spectral Poisson solver"""

    def setUp(self):
        """Set up test fixtures"""
        self.grid = Grid2D(32, 32, 0.0, 2.0 * math.pi, 0.0, 2.0 * math.pi)
        self.X, self.Y = self.grid.nodes()

    def test_cosine_density(self):
        """Test rho - mean = cos x1 gives E = (sin x1, 0)"""
        E = solve_poisson(ScalarField(self.grid, 1.0 + np.cos(self.X)))
        np.testing.assert_allclose(E.e1, np.sin(self.X), atol=1e-12)
        np.testing.assert_allclose(E.e2, 0.0, atol=1e-12)

    def test_constant_density(self):
        """Test a uniform density is fully neutralized"""
        E = solve_poisson(ScalarField(self.grid, np.full(self.grid.shape, 3.0)))
        np.testing.assert_allclose(E.e1, 0.0, atol=1e-13)
        np.testing.assert_allclose(E.e2, 0.0, atol=1e-13)

    def test_divergence_matches_density(self):
        """Test div E equals rho minus its mean for a smooth density"""
        rho = 2.0 + np.sin(self.X) * np.cos(2.0 * self.Y) + 0.5 * np.cos(3.0 * self.Y)
        E = solve_poisson(ScalarField(self.grid, rho))
        div = spectral_divergence(E)
        np.testing.assert_allclose(div.values, rho - rho.mean(), atol=1e-11)

    def test_field_energy_parseval(self):
        """Test the grid quadrature equals the sum over Fourier modes"""
        rng = np.random.default_rng(5)
        E = VectorField2D(self.grid, rng.normal(size=self.grid.shape), rng.normal(size=self.grid.shape))
        n = self.grid.nx * self.grid.ny
        modes = np.sum(np.abs(np.fft.fft2(E.e1)) ** 2) + np.sum(np.abs(np.fft.fft2(E.e2)) ** 2)
        expected = 0.5 * 0.7 * self.grid.cell_area * modes / n
        self.assertAlmostEqual(field_energy(E, lam=0.7) / expected, 1.0, places=12)

    def test_poisson_energy_in_fourier_space(self):
        """Test the field energy of a Poisson solution is the sum of |rho_k|^2 |k|^2 / |k|^4"""
        rho = 1.0 + np.sin(self.X) * np.cos(2.0 * self.Y) + 0.3 * np.cos(5.0 * self.X + self.Y)
        E = solve_poisson(ScalarField(self.grid, rho))
        kx = np.fft.fftfreq(self.grid.nx, d=self.grid.dx)[:, None] * 2.0 * math.pi
        ky = np.fft.fftfreq(self.grid.ny, d=self.grid.dy)[None, :] * 2.0 * math.pi
        k2 = kx ** 2 + ky ** 2
        k2[0, 0] = 1.0
        rho_hat = np.fft.fft2(rho - rho.mean())
        modes = np.sum(np.abs(rho_hat) ** 2 / k2)
        expected = 0.5 * self.grid.cell_area * modes / (self.grid.nx * self.grid.ny)
        self.assertAlmostEqual(field_energy(E), expected, places=10)

    def test_non_finite_density_rejected(self):
        """Test NaN densities are rejected"""
        values = np.zeros(self.grid.shape)
        values[3, 4] = np.nan
        with self.assertRaises(ValueError):
            solve_poisson(ScalarField(self.grid, values))

    def test_field_energy(self):
        """Test the grid quadrature of (lam/2) int |E|^2"""
        E = VectorField2D(self.grid, np.sin(self.X))
        self.assertAlmostEqual(field_energy(E), math.pi ** 2, places=10)
        self.assertAlmostEqual(field_energy(E, lam=0.5), 0.5 * math.pi ** 2, places=10)
        with self.assertRaises(ValueError):
            field_energy(E, lam=0.0)


if __name__ == '__main__':
    unittest.main()
