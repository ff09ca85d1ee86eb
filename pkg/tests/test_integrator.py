"""
Unit tests for the scaling regimes, the relaxation steppers and the RK4 reference
"""

import math
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from erpic.integrators import (Branch, FieldSolver, PrescribedField, SimState, regime_coefficients, psi1_step,
                               psi2_predict, psi2_step, relaxation_gamma, step_rs1, step_rs2, rk4_reference,
                               SCHEMES)
from erpic.mesh import Grid2D, ParticleEnsemble, ScalarField, deposit_weights, interpolate_field, solve_poisson
from erpic.physics.magnetic import example1_model, uniform_model, vector_model
from erpic.physics.sampling import TwoBump, sample_ensemble


def cyclotron_position(x0, v0, kappa, t):
    """Exact position of dx/dt = v, dv/dt = kappa v x e3 in the plane"""
    s, c = math.sin(kappa * t), math.cos(kappa * t)
    M = np.array([[s, 1.0 - c], [-(1.0 - c), s]]) / kappa
    return x0 + M @ v0


class HarmonicWell:
    """Field evaluator of the potential |x|^2/2: E(x) = -x and W = sum w |x|^2/2"""

    def wrap(self, positions):
        return positions

    def solve(self, positions, weights):
        return np.array(positions, dtype=float), np.array(weights, dtype=float)

    def at(self, field, positions):
        return -np.asarray(positions, dtype=float).reshape(-1, 2)

    def energy(self, field, lam):
        positions, weights = field
        return 0.5 * lam * float(np.sum(weights * np.sum(positions ** 2, axis=1)))


class TestRegimes(unittest.TestCase):
    """Test cases for regime_coefficients"""

    def test_coefficient_table(self):
        """Test (kappa_B, kappa_E, lam, horizon factor) per regime"""
        fluid = regime_coefficients("fluid", 0.25)
        self.assertEqual((fluid.kappa_B, fluid.kappa_E, fluid.lam, fluid.horizon_factor), (4.0, 1.0, 1.0, 1.0))
        larmor = regime_coefficients("larmor", 0.5)
        self.assertEqual((larmor.kappa_B, larmor.kappa_E, larmor.lam, larmor.horizon_factor), (1.0, 0.5, 0.5, 2.0))
        diffusion = regime_coefficients("diffusion", 0.1)
        self.assertAlmostEqual(diffusion.kappa_B, 10.0)
        self.assertEqual((diffusion.kappa_E, diffusion.lam), (1.0, 1.0))
        self.assertAlmostEqual(diffusion.horizon(1.0), 10.0)

    def test_time_variable(self):
        """Test rescaled regimes integrate in tau = t/eps"""
        self.assertEqual(regime_coefficients("fluid", 0.1).time_variable, "t")
        larmor = regime_coefficients("larmor", 0.1)
        self.assertEqual(larmor.time_variable, "tau")
        self.assertAlmostEqual(larmor.physical_time(300.0), 30.0)

    def test_invalid_arguments(self):
        """Test eps outside (0, 1] and unknown regimes are rejected"""
        for eps in (0.0, -0.1, 1.5):
            with self.assertRaises(ValueError):
                regime_coefficients("fluid", eps)
        with self.assertRaises(ValueError):
            regime_coefficients("kinetic", 0.5)


class TestRelaxationGamma(unittest.TestCase):
    """Test cases for the relaxation root"""

    def test_degenerate_a(self):
        """Test A at the tolerance gives gamma = 0 with DEGENERATE_A"""
        gamma, branch, _ = relaxation_gamma(0.0, 1.0, 0.5, 0.1, 1.0)
        self.assertEqual((gamma, branch), (0.0, Branch.DEGENERATE_A))

    def test_negative_discriminant(self):
        """Test D < 0 gives gamma = 0 with NEGATIVE_DISCRIMINANT"""
        gamma, branch, D = relaxation_gamma(1.0, 0.1, 1.0, 0.1, 1.0)
        self.assertEqual((gamma, branch), (0.0, Branch.NEGATIVE_DISCRIMINANT))
        self.assertAlmostEqual(D, 0.01 - 2.0)

    def test_zero_energy_defect(self):
        """Test H_tilde = 0 needs no relaxation"""
        gamma, branch, _ = relaxation_gamma(2.0, 0.5, 0.0, 0.1, 1.0)
        self.assertEqual((gamma, branch), (0.0, Branch.REAL_ROOT))

    def test_zero_c_uses_positive_sign(self):
        """Test sgn(0) = +1 picks g = sqrt(-2 H_tilde / A)"""
        gamma, branch, _ = relaxation_gamma(1.0, 0.0, -0.5, 1.0, 1.0)
        self.assertEqual(branch, Branch.REAL_ROOT)
        self.assertAlmostEqual(gamma, 1.0)

    def test_closed_form_root(self):
        """Test A = 2, C = 3, H_tilde = 1, h = 0.1 gives gamma = (-3 + sqrt 5)/0.2"""
        gamma, branch, D = relaxation_gamma(2.0, 3.0, 1.0, 0.1, 1.0)
        self.assertEqual(branch, Branch.REAL_ROOT)
        self.assertAlmostEqual(D, 5.0, places=14)
        self.assertAlmostEqual(gamma, (-3.0 + math.sqrt(5.0)) / 0.2, places=12)

    def test_gamma_is_second_order_in_a_harmonic_well(self):
        """Test the relaxation coefficient of one step behaves like -h^2/4 and quarters when h halves"""
        coeffs = regime_coefficients("fluid", 1.0)
        ensemble = ParticleEnsemble.uniform(np.array([[0.6, 0.2]]), np.array([[0.5, 0.8]]), 1.0)
        state = SimState.initial(ensemble, HarmonicWell(), coeffs.lam)
        gammas = []
        for h in (0.02, 0.01, 0.005):
            new_state, record = psi2_step(state, h, coeffs)
            self.assertEqual(record.branch, Branch.REAL_ROOT)
            self.assertAlmostEqual(new_state.H, state.H, delta=1e-14)
            self.assertAlmostEqual(record.gamma / (h * h), -0.25, delta=0.0125)
            gammas.append(record.gamma)
        for coarse, fine in zip(gammas, gammas[1:]):
            self.assertTrue(3.8 <= coarse / fine <= 4.2, msg=f"{gammas}")

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1e3), st.floats(min_value=-10.0, max_value=10.0),
           st.floats(min_value=-1e-2, max_value=1e-2), st.floats(min_value=1e-3, max_value=1.0),
           st.floats(min_value=0.01, max_value=1.0))
    def test_root_solves_energy_condition(self, A, C, H_tilde, h, kappa_E):
        """Test H_tilde + g C + g^2 A/2 = 0 with g = h gamma kappa_E on the real-root branch"""
        gamma, branch, D = relaxation_gamma(A, C, H_tilde, h, kappa_E)
        if D < 0:
            self.assertEqual(branch, Branch.NEGATIVE_DISCRIMINANT)
            return
        g = h * gamma * kappa_E
        residual = H_tilde + g * C + 0.5 * g * g * A
        scale = abs(H_tilde) + abs(g * C) + abs(0.5 * g * g * A) + 1e-300
        self.assertLessEqual(abs(residual), 1e-12 * scale)


class TestCyclotron(unittest.TestCase):
    """Single-particle gyration in a uniform field with no electric field"""

    def setUp(self):
        """Set up test fixtures"""
        self.coeffs = regime_coefficients("fluid", 1.0)
        self.model = uniform_model(1.0)
        self.x0 = np.array([0.2, -0.4])
        self.v0 = np.array([1.0, 0.5])
        ensemble = ParticleEnsemble.uniform(self.x0[None, :], self.v0[None, :], 1.0)
        self.state = SimState.initial(ensemble, PrescribedField.zero(), self.coeffs.lam)

    def _advance(self, step, h, n):
        state = self.state
        for _ in range(n):
            state, record = step(state, h, self.coeffs, self.model)
        return state, record

    def test_rs1_position_error_bounded(self):
        """Test RS1 positions stay within O(h) of the exact circle"""
        h, n = 0.11, 100
        state, record = self._advance(step_rs1, h, n)
        exact = cyclotron_position(self.x0, self.v0, 1.0, h * n)
        err = float(np.linalg.norm(state.positions[0] - exact))
        self.assertLessEqual(err, 5.0 * h * np.linalg.norm(self.v0))
        self.assertEqual(record.branch, Branch.DEGENERATE_A)

    def test_rs2_velocity_exact(self):
        """Test RS2 rotates the velocity exactly and keeps the positions second order"""
        h, n = 0.11, 100
        state, _ = self._advance(step_rs2, h, n)
        theta = h * n
        exact_v = np.array([math.cos(theta) * self.v0[0] + math.sin(theta) * self.v0[1],
                            -math.sin(theta) * self.v0[0] + math.cos(theta) * self.v0[1]])
        np.testing.assert_allclose(state.velocities[0], exact_v, atol=1e-12)
        exact_x = cyclotron_position(self.x0, self.v0, 1.0, theta)
        self.assertLessEqual(float(np.linalg.norm(state.positions[0] - exact_x)), h * h * np.linalg.norm(self.v0))
        self.assertAlmostEqual(state.time, theta, places=12)
        self.assertEqual(state.step_index, n)

    def test_energy_exact_without_field(self):
        """Test H stays at |v0|^2/2 to rounding"""
        state, record = self._advance(step_rs2, 0.05, 200)
        self.assertAlmostEqual(record.H, 0.5 * float(self.v0 @ self.v0), places=13)

    def test_three_dimensional_gyration(self):
        """Test the 3D model about e3 reproduces the planar trajectory"""
        ens3 = ParticleEnsemble.uniform(self.x0[None, :], np.array([[1.0, 0.5, 0.0]]), 1.0)
        state3 = SimState.initial(ens3, PrescribedField.zero(), self.coeffs.lam)
        model3 = vector_model((0.0, 0.0, 1.0))
        state2 = self.state
        for _ in range(50):
            state3, _ = step_rs2(state3, 0.1, self.coeffs, model3)
            state2, _ = step_rs2(state2, 0.1, self.coeffs, self.model)
        np.testing.assert_allclose(state3.positions, state2.positions, atol=1e-12)
        np.testing.assert_allclose(state3.velocities[:, :2], state2.velocities, atol=1e-12)

    def test_rk4_one_period(self):
        """Test RK4 returns to the start after one gyration period"""
        n = 6000
        h = 2.0 * math.pi / n
        state = rk4_reference(self.state, h, n, self.coeffs, self.model)
        np.testing.assert_allclose(state.positions[0], self.x0, atol=1e-10)
        np.testing.assert_allclose(state.velocities[0], self.v0, atol=1e-10)
        self.assertAlmostEqual(state.time, 2.0 * math.pi, places=10)

    def test_zero_step_is_identity(self):
        """Test h = 0 returns the state unchanged"""
        for step in (step_rs1, step_rs2):
            state, record = step(self.state, 0.0, self.coeffs, self.model)
            self.assertIs(state, self.state)
            self.assertEqual(record.gamma, 0.0)

    def test_invalid_step_size(self):
        """Test psi2 rejects non-positive steps"""
        with self.assertRaises(ValueError):
            psi2_predict(self.state, -0.1, self.coeffs)


class TestSelfConsistentSteps(unittest.TestCase):
    """Energy behaviour of the relaxation schemes with the PIC field"""

    @classmethod
    def setUpClass(cls):
        """Set up test fixtures shared by all tests"""
        cls.grid = Grid2D(16, 8, 0.0, 4.0 * math.pi, 0.0, 2.0 * math.pi)
        cls.ensemble = sample_ensemble(TwoBump(), 4000, seed=3)
        cls.model = example1_model()

    def setUp(self):
        """Set up test fixtures"""
        self.coeffs = regime_coefficients("fluid", 0.1)
        self.state = SimState.initial(self.ensemble, FieldSolver(self.grid), self.coeffs.lam)

    def test_exact_conservation_on_real_root_steps(self):
        """Test |H_{n+1} - H_n| <= 1e-11 |H_0| on every REAL_ROOT step of both schemes"""
        H0 = self.state.H
        for name, step in SCHEMES.items():
            state = self.state
            real_root = 0
            for _ in range(20):
                H_prev = state.H
                state, record = step(state, 0.05, self.coeffs, self.model)
                if record.branch == Branch.REAL_ROOT:
                    real_root += 1
                    self.assertLessEqual(abs(record.H - H_prev), 1e-11 * abs(H0), msg=name)
            self.assertGreaterEqual(real_root, 10, msg=name)

    def test_psi1_keeps_positions_and_field(self):
        """Test the rotation subflow leaves x, E and W untouched and preserves kinetic energy"""
        rotated = psi1_step(self.state, 0.05, self.coeffs, self.model)
        np.testing.assert_array_equal(rotated.positions, self.state.positions)
        self.assertIs(rotated.field, self.state.field)
        self.assertEqual(rotated.W, self.state.W)
        self.assertAlmostEqual(rotated.H, self.state.H, delta=1e-13 * abs(self.state.H))

    def test_cached_state_consistent(self):
        """Test cached field and energy match a fresh solve after a few steps"""
        state = self.state
        for _ in range(3):
            state, _ = step_rs2(state, 0.05, self.coeffs, self.model)
        self.assertTrue(state.check_consistency(self.coeffs.lam, rtol=1e-10))

    def test_record_matches_state(self):
        """Test the step record carries the final state's time and energy"""
        state, record = psi2_step(self.state, 0.05, self.coeffs)
        self.assertEqual(record.step_index, 1)
        self.assertEqual(record.time, state.time)
        self.assertEqual(record.H, state.H)

    def test_deterministic(self):
        """Test identical inputs give bitwise identical trajectories"""
        a, b = self.state, self.state
        for _ in range(3):
            a, _ = step_rs2(a, 0.05, self.coeffs, self.model)
            b, _ = step_rs2(b, 0.05, self.coeffs, self.model)
        np.testing.assert_array_equal(a.positions, b.positions)
        np.testing.assert_array_equal(a.velocities, b.velocities)

    def test_fluid_and_diffusion_coincide_at_unit_eps(self):
        """Test fluid and diffusion scalings give identical trajectories at eps = 1"""
        fluid = regime_coefficients("fluid", 1.0)
        diffusion = regime_coefficients("diffusion", 1.0)
        a = SimState.initial(self.ensemble, FieldSolver(self.grid), fluid.lam)
        b = SimState.initial(self.ensemble, FieldSolver(self.grid), diffusion.lam)
        for _ in range(3):
            a, _ = step_rs1(a, 0.05, fluid, self.model)
            b, _ = step_rs1(b, 0.05, diffusion, self.model)
        np.testing.assert_array_equal(a.positions, b.positions)
        np.testing.assert_array_equal(a.velocities, b.velocities)


class TestPredictor(unittest.TestCase):
    """The unrelaxed Stormer-Verlet update against a particle-by-particle evaluation"""

    def setUp(self):
        """Set up test fixtures"""
        self.grid = Grid2D(8, 8, 0.0, 2.0 * math.pi, 0.0, 2.0 * math.pi)
        self.coeffs = regime_coefficients("larmor", 0.5)
        positions = np.array([[0.3, 1.1], [2.0, 5.9], [6.1, 0.2], [4.4, 3.3]])
        velocities = np.array([[1.0, -0.5], [-2.0, 0.3], [0.7, 1.9], [0.0, -1.2]])
        self.state = SimState.initial(ParticleEnsemble.uniform(positions, velocities, 2.0),
                                      FieldSolver(self.grid), self.coeffs.lam)

    def _field(self, positions):
        rho = deposit_weights(positions, self.state.ensemble.weights, self.grid)
        return solve_poisson(ScalarField(self.grid, rho))

    def test_matches_naive_update(self):
        """Test X1, E(X1), x_new, v_tilde and E_new of four particles"""
        h, kappa_E = 0.2, self.coeffs.kappa_E
        pred = psi2_predict(self.state, h, self.coeffs)
        x, v = self.state.positions, self.state.velocities
        X1 = np.array([self.grid.wrap(x[k] + 0.5 * h * v[k]) for k in range(4)])
        field_X1 = self._field(X1)
        E_X1 = np.array([interpolate_field(field_X1, X1[k]) for k in range(4)])
        x_new = np.array([self.grid.wrap(x[k] + h * v[k] + 0.5 * h * h * kappa_E * E_X1[k]) for k in range(4)])
        v_tilde = np.array([v[k] + h * kappa_E * E_X1[k] for k in range(4)])
        E_new = self._field(x_new)
        np.testing.assert_allclose(pred.X1, X1, atol=1e-14)
        np.testing.assert_allclose(pred.E_X1, E_X1, atol=1e-13)
        np.testing.assert_allclose(pred.x_new, x_new, atol=1e-13)
        np.testing.assert_allclose(pred.v_tilde, v_tilde, atol=1e-13)
        np.testing.assert_allclose(pred.E_new.e1, E_new.e1, atol=1e-13)
        np.testing.assert_allclose(pred.E_new.e2, E_new.e2, atol=1e-13)


class TestReferenceIntegrator(unittest.TestCase):
    """RK4 on a linear manufactured field"""

    def setUp(self):
        """Set up test fixtures"""
        self.coeffs = regime_coefficients("fluid", 1.0)
        self.x0 = np.array([[0.6, 0.2], [-1.0, 0.5]])
        self.v0 = np.array([[0.5, 0.8], [0.0, -0.3]])
        self.state = SimState.initial(ParticleEnsemble.uniform(self.x0, self.v0, 1.0), HarmonicWell(),
                                      self.coeffs.lam)

    def test_harmonic_oscillator(self):
        """Test x'' = -x is followed to fourth-order accuracy without a magnetic field"""
        h, n = 0.01, 200
        state = rk4_reference(self.state, h, n, self.coeffs, uniform_model(0.0))
        t = h * n
        np.testing.assert_allclose(state.positions, self.x0 * math.cos(t) + self.v0 * math.sin(t), atol=1e-9)
        np.testing.assert_allclose(state.velocities, -self.x0 * math.sin(t) + self.v0 * math.cos(t), atol=1e-9)
        self.assertAlmostEqual(state.H, self.state.H, delta=1e-10)
        self.assertEqual(state.step_index, n)

    def test_richardson_step_halving(self):
        """Test successive differences of h, h/2, h/4 shrink by about 16 with the magnetic field on"""
        model = example1_model()
        finals = []
        for h, n in ((0.05, 40), (0.025, 80), (0.0125, 160)):
            finals.append(rk4_reference(self.state, h, n, self.coeffs, model).positions)
        coarse = float(np.max(np.abs(finals[0] - finals[1])))
        fine = float(np.max(np.abs(finals[1] - finals[2])))
        self.assertTrue(13.0 <= coarse / fine <= 19.0, msg=f"{coarse} {fine}")


if __name__ == '__main__':
    unittest.main()
