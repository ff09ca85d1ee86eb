"""
Desk-scale acceptance runs

These take minutes each and only run when ERPIC_ACCEPTANCE is set:

    ERPIC_ACCEPTANCE=1 pytest tests/test_acceptance.py
"""

import os
import tempfile
import unittest
from dataclasses import replace

import numpy as np

from erpic.analysis import angular_mode_spectrum, compute_moments
from erpic.runner import ConvergenceSpec, Simulation, preset, run_convergence

ACCEPTANCE = bool(os.environ.get('ERPIC_ACCEPTANCE'))


def _quiet(config, **changes):
    output = replace(config.output, snapshot_times=(), moments=False, marginal=False, plots=False, log_every=0)
    return replace(config, output=output, **changes)


@unittest.skipUnless(ACCEPTANCE, "set ERPIC_ACCEPTANCE=1 to run desk-scale acceptance runs")
class TestDeskAcceptance(unittest.TestCase):
    """Acceptance runs on the desk-scale presets"""

    def setUp(self):
        """Set up test fixtures"""
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.example1 = preset('example1', 'desk')

    def _run(self, config, name):
        simulation = Simulation(config, output_dir=os.path.join(self.tmp.name, name))
        H0 = simulation.initial_state().H
        return H0, simulation.run()

    def _table(self, config, eps, dt_list, scheme, name):
        """Error table of one eps with t_final = eps, so the tau horizon is 1"""
        spec = ConvergenceSpec(_quiet(config, t_final=eps), [eps], dt_list, dt_ref=1e-4, scheme=scheme)
        return run_convergence(spec, os.path.join(self.tmp.name, name))

    def test_exact_conservation(self):
        """Test real-root steps conserve H and the full series stays below 1e-5 for both schemes"""
        for scheme in ('RS1', 'RS2'):
            H0, result = self._run(_quiet(self.example1, scheme=scheme, t_final=20.0), scheme)
            H = np.concatenate([[H0], result.energy['H'].to_numpy()])
            real = result.energy['branch'].to_numpy() == 0
            self.assertGreater(real.mean(), 0.95, msg=scheme)
            self.assertTrue(np.all(np.abs(np.diff(H))[real] <= 1e-11 * abs(H0)), msg=scheme)
            self.assertLessEqual(float(result.energy['relH_err'].max()), 1e-5, msg=scheme)

    def test_gamma_is_second_order(self):
        """Test halving dt divides max|gamma| by about four"""
        peaks = []
        for dt in (0.1, 0.05, 0.025):
            _, result = self._run(_quiet(self.example1, dt=dt, t_final=2.0), f'gamma-{dt}')
            peaks.append(float(np.max(np.abs(result.energy['gamma']))))
        for coarse, fine in zip(peaks, peaks[1:]):
            self.assertTrue(2.5 <= coarse / fine <= 6.0, msg=f"{peaks}")

    def test_rs1_first_order(self):
        """Test RS1 orders stay near one once the error is below 0.1"""
        base = _quiet(self.example1, t_final=1.0)
        spec = ConvergenceSpec(base, [1.0, 0.25, 1 / 16, 1 / 64], [1 / 16, 1 / 32, 1 / 64, 1 / 128],
                               dt_ref=1e-4, scheme='RS1')
        table = run_convergence(spec, self.tmp.name)
        settled = table[(table['err_rho_rhov'] < 0.1) & table['order'].notna()]
        self.assertGreater(len(settled), 0)
        self.assertTrue(np.all(settled['order'].between(0.7, 1.3)), msg=str(table))
        for _, rows in table.groupby('dt'):
            self.assertLess(rows['err_rho_rhov'].max() / rows['err_rho_rhov'].min(), 3.0, msg=str(table))

    def test_rs2_second_order(self):
        """Test RS2 reaches second order on the finest steps"""
        base = _quiet(self.example1, t_final=1.0)
        spec = ConvergenceSpec(base, [1 / 16, 1 / 64], [1 / 8, 1 / 16, 1 / 32, 1 / 64], dt_ref=1e-4, scheme='RS2')
        table = run_convergence(spec, self.tmp.name)
        for eps, rows in table.groupby('eps'):
            self.assertTrue(1.7 <= rows['order'].iloc[-1] <= 2.3, msg=str(table))

    def test_larmor_orders(self):
        """Test RS1 is first and RS2 second order in tau for the Larmor scaling"""
        larmor = preset('example3-larmor', 'desk')
        dt_list = [1 / 8, 1 / 16, 1 / 32, 1 / 64]
        for eps in (1 / 2, 1 / 8):
            rs1 = self._table(larmor, eps, dt_list, 'RS1', f'larmor-rs1-{eps}')
            rs2 = self._table(larmor, eps, dt_list, 'RS2', f'larmor-rs2-{eps}')
            self.assertTrue(0.7 <= rs1['order'].iloc[-1] <= 1.3, msg=str(rs1))
            self.assertTrue(1.7 <= rs2['order'].iloc[-1] <= 2.3, msg=str(rs2))

    def test_larmor_energy(self):
        """Test the Larmor run conserves the energy weighted by lam = eps"""
        config = _quiet(preset('example3-larmor', 'desk'), eps=0.5, t_final=10.0)
        simulation = Simulation(config, output_dir=os.path.join(self.tmp.name, 'larmor-energy'))
        self.assertEqual(simulation.coeffs.lam, 0.5)
        H0 = simulation.initial_state().H
        result = simulation.run()
        H = np.concatenate([[H0], result.energy['H'].to_numpy()])
        real = result.energy['branch'].to_numpy() == 0
        self.assertGreater(real.mean(), 0.95)
        self.assertTrue(np.all(np.abs(np.diff(H))[real] <= 1e-11 * abs(H0)))
        self.assertLessEqual(float(result.energy['relH_err'].max()), 1e-5)

    def test_diffusion_error_grows_as_eps_shrinks(self):
        """Test the diffusion error at eps/2 is at least the error at eps for the largest step"""
        diffusion = preset('diffusion-rect', 'desk')
        dt_list = [1 / 8, 1 / 16]
        coarse = {eps: self._table(diffusion, eps, dt_list, 'RS2', f'diffusion-{eps}')['err_rho_rhov'].iloc[0]
                  for eps in (1 / 4, 1 / 8)}
        self.assertGreaterEqual(coarse[1 / 8], coarse[1 / 4], msg=str(coarse))

    def test_diocotron_mode(self):
        """Test the diocotron ring breaks into five vortices"""
        config = _quiet(preset('example2-diocotron', 'desk'), t_final=40.0)
        _, result = self._run(config, 'diocotron')
        spectrum = angular_mode_spectrum(compute_moments(result.state).rho, n_modes=10)
        self.assertEqual(int(np.argmax(spectrum[1:])) + 1, 5)


if __name__ == '__main__':
    unittest.main()
