import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

try:
    # When used as a package
    from ..analysis.diagnostics import compute_moments, energy_frame, velocity_marginal
    from ..analysis.energy_report import EnergyReport
    from ..analysis.plots import show_energy_error, show_field, show_velocity_marginal
    from ..data.ensemble_io import dump_ensemble
    from ..data.manifest import write_manifest
    from ..data.snapshots import write_grid_values, write_snapshot
    from ..integrators.relaxation import SCHEMES
    from ..integrators.rk4 import rk4_reference
    from ..integrators.state import Branch, FieldSolver, SimState, StepRecord
    from ..mesh import ParticleEnsemble
    from ..physics.magnetic import check_bounded
    from ..physics.sampling import sample_ensemble
    from ..utils.errors import NumericalError
    from ..utils.helpers import write_csv
    from .config import SimulationConfig, render_config
except ImportError:
    # When used as standalone
    from erpic.analysis.diagnostics import compute_moments, energy_frame, velocity_marginal
    from erpic.analysis.energy_report import EnergyReport
    from erpic.analysis.plots import show_energy_error, show_field, show_velocity_marginal
    from erpic.data.ensemble_io import dump_ensemble
    from erpic.data.manifest import write_manifest
    from erpic.data.snapshots import write_grid_values, write_snapshot
    from erpic.integrators.relaxation import SCHEMES
    from erpic.integrators.rk4 import rk4_reference
    from erpic.integrators.state import Branch, FieldSolver, SimState, StepRecord
    from erpic.mesh import ParticleEnsemble
    from erpic.physics.magnetic import check_bounded
    from erpic.physics.sampling import sample_ensemble
    from erpic.utils.errors import NumericalError
    from erpic.utils.helpers import write_csv
    from erpic.runner.config import SimulationConfig, render_config

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


@dataclass
class SimulationResult:
    state: SimState
    records: List[StepRecord]
    energy: pd.DataFrame
    snapshots: List[Path] = field(default_factory=list)
    report: Optional[EnergyReport] = None
    output_dir: Optional[Path] = None


class Simulation:
    def __init__(self, config: SimulationConfig, config_text: Optional[str] = None, output_dir=None):
        """
        One run of the particle-in-cell loop: deposit, solve, interpolate, push.

        Parameters:
        - config: SimulationConfig, validated configuration
        - config_text: str, configuration text echoed into the manifest (rendered from config if None)
        - output_dir: str or Path, overrides config.output.directory
        """
        self.config = config
        self.config_text = config_text if config_text is not None else render_config(config)
        self.output_dir = Path(output_dir if output_dir is not None else config.output.directory)
        self.coeffs = config.coeffs
        self.grid = config.build_grid()
        self.model = config.build_model()
        self.distribution = config.build_distribution()
        self.n_steps = config.n_steps
        check_bounded(self.model, (self.grid.x_lo, self.grid.x_hi, self.grid.y_lo, self.grid.y_hi))

    def initial_state(self, ensemble: Optional[ParticleEnsemble] = None) -> SimState:
        """Sample the initial ensemble (unless given) and solve its field."""
        if ensemble is None:
            ensemble = sample_ensemble(self.distribution, self.config.init.particles, self.config.init.seed)
        return SimState.initial(ensemble, FieldSolver(self.grid), self.coeffs.lam)

    def advance(self, state: SimState):
        """One step of the configured scheme. Return: (SimState, StepRecord)"""
        dt = self.config.dt
        if self.config.scheme == "RK4REF":
            new_state = rk4_reference(state, dt, 1, self.coeffs, self.model)
            return new_state, StepRecord(new_state.step_index, new_state.time, new_state.H, 0.0,
                                         Branch.REAL_ROOT, 0.0)
        return SCHEMES[self.config.scheme](state, dt, self.coeffs, self.model)

    def snapshot_steps(self):
        """Step indices at which snapshots are written, mapped to the requested times."""
        steps = {0: 0.0}
        for ts in self.config.output.snapshot_times:
            n = int(round(ts / self.config.dt))
            if n <= self.n_steps:
                steps[n] = ts
            else:
                logger.warning(f"Snapshot time {ts} lies beyond the horizon {self.config.horizon}; skipped")
        return steps

    def write_snapshots(self, state: SimState):
        out = self.config.output
        paths = []
        tag = f"step{state.step_index:06d}"
        if out.moments:
            moments = compute_moments(state, self.grid)
            paths.append(write_snapshot(moments.rho, state.time, self.output_dir / f"rho_{tag}.dat"))
            paths.append(write_snapshot(moments.rho_v, state.time, self.output_dir / f"rhov_{tag}.dat"))
            if out.plots:
                show_field(moments.rho, plot_title=f"rho at {self.coeffs.time_variable} = {state.time:g}") \
                    .write_html(self.output_dir / f"rho_{tag}.html")
        if out.marginal:
            chi = velocity_marginal(state, out.marginal_nv, out.marginal_vmax)
            paths.append(write_grid_values(chi.values, (chi.v_lo, chi.v_hi, chi.v_lo, chi.v_hi), state.time,
                                           self.output_dir / f"chi_{tag}.dat"))
            if out.plots:
                show_velocity_marginal(chi).write_html(self.output_dir / f"chi_{tag}.html")
        return paths

    def _abort(self, state: SimState, message):
        dump_path = self.output_dir / f"state_step{state.step_index:06d}.bin"
        try:
            dump_ensemble(state.ensemble, dump_path)
        except OSError as exc:
            logger.error(f"Could not write state dump {dump_path}: {exc}")
            dump_path = None
        logger.error(f"Run aborted at step {state.step_index}: {message}")
        return NumericalError(message, state.step_index, None if dump_path is None else str(dump_path))

    def run(self, ensemble: Optional[ParticleEnsemble] = None) -> SimulationResult:
        """
        Step the configured scheme to the horizon and write the outputs.

        Parameters:
        - ensemble: ParticleEnsemble, optional initial ensemble replacing the sampled one
        """
        config, coeffs = self.config, self.coeffs
        self.output_dir.mkdir(parents=True, exist_ok=True)
        logger.info(f"Run: scheme {config.scheme}, regime {coeffs.regime}, eps {coeffs.eps}, "
                    f"{self.n_steps} steps of d{coeffs.time_variable} = {config.dt} to "
                    f"{coeffs.time_variable} = {config.horizon:g} (t = {config.t_final:g})")

        state = self.initial_state(ensemble)
        H0 = state.H
        if H0 == 0 or not np.isfinite(H0):
            raise self._abort(state, f"Invalid initial energy {H0}")
        snapshot_steps = self.snapshot_steps()
        snapshots = self.write_snapshots(state)
        snapshot_times = [state.time]

        records = []
        fallback_seen = False
        log_every = config.output.log_every
        for n in range(1, self.n_steps + 1):
            try:
                with np.errstate(over="raise", invalid="raise", divide="raise"):
                    state, record = self.advance(state)
                if config.output.debug:
                    state.check_consistency(coeffs.lam)
            except (ValueError, FloatingPointError, NumericalError) as exc:
                raise self._abort(state, str(exc)) from exc
            if not np.isfinite(record.H):
                raise self._abort(state, f"Non-finite energy {record.H}")
            records.append(record)

            if record.branch != Branch.REAL_ROOT and not fallback_seen:
                fallback_seen = True
                logger.warning(f"Step {n}: relaxation fell back to gamma = 0 ({record.branch.name}, "
                               f"discriminant {record.discriminant:.3e})")
            if n in snapshot_steps:
                snapshots.extend(self.write_snapshots(state))
                snapshot_times.append(state.time)
            if log_every and n % log_every == 0:
                rel = abs(record.H - H0) / abs(H0)
                logger.info(f"Progress: {n}/{self.n_steps} steps ({coeffs.time_variable} = {state.time:.4g}, "
                            f"t = {coeffs.physical_time(state.time):.4g}, relH_err = {rel:.3e})")

        energy = energy_frame(records, H0)
        if config.output.energy:
            write_csv(energy, self.output_dir / "energy.csv")
        report = EnergyReport(energy, H0, plot_title=f"{config.scheme} energy conservation",
                              scheme=config.scheme, regime=coeffs.regime, eps=coeffs.eps, dt=config.dt)
        report.summarize()
        if report.energy_summary["number_of_steps"] > report.energy_summary["real_root_steps"]:
            logger.warning(f"{report.energy_summary['number_of_steps'] - report.energy_summary['real_root_steps']} "
                           f"steps used gamma = 0")
        if config.output.plots:
            report.show_energy().write_html(self.output_dir / "energy.html")
            title = f"{config.scheme} relative energy error, {coeffs.regime} eps = {coeffs.eps:g}"
            show_energy_error({config.scheme: energy}, plot_title=title) \
                .write_html(self.output_dir / "energy_error.html")

        write_manifest(self.output_dir / "manifest.json", self.config_text,
                       seed=config.init.seed, scheme=config.scheme, regime=coeffs.regime, eps=coeffs.eps,
                       kappa_B=coeffs.kappa_B, kappa_E=coeffs.kappa_E, lam=coeffs.lam,
                       time_variable=coeffs.time_variable, dt=config.dt, t_final=config.t_final,
                       horizon=config.horizon, n_steps=self.n_steps, n_particles=state.ensemble.n_p,
                       t_final_physical=coeffs.physical_time(state.time),
                       snapshot_times=snapshot_times,
                       snapshot_times_physical=[coeffs.physical_time(s) for s in snapshot_times],
                       initial_H=H0, final_H=state.H,
                       snapshots=[p.name for p in snapshots])
        logger.info(f"Outputs written to {self.output_dir}")
        return SimulationResult(state, records, energy, snapshots, report, self.output_dir)


def run_simulation(config: SimulationConfig, config_text: Optional[str] = None, output_dir=None):
    """
    Run a configured simulation.

    Return: (final SimState, list of StepRecord, list of snapshot paths)
    """
    result = Simulation(config, config_text, output_dir).run()
    return result.state, result.records, result.snapshots
