"""
Convergence study: error of the relaxation schemes against an RK4 reference

For every eps the same sampled ensemble is advanced by RK4 at dt_ref (the
reference, checked against a second run at 2*dt_ref) and by the chosen scheme at
each dt of the list. The error is the relative maximum-norm error of (rho, rho_v)
at the horizon; the observed order compares consecutive step sizes.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

try:
    # When used as a package
    from ..analysis.diagnostics import compute_moments, relative_error
    from ..analysis.plots import show_convergence
    from ..integrators.regimes import regime_coefficients
    from ..integrators.relaxation import SCHEMES
    from ..integrators.rk4 import rk4_reference
    from ..integrators.state import FieldSolver, SimState
    from ..physics.sampling import sample_ensemble
    from ..utils.errors import ConfigError, ConfigViolation, ReferenceConvergenceError
    from ..utils.helpers import step_count, worker_count, write_csv
    from .config import SimulationConfig
except ImportError:
    # When used as standalone
    from erpic.analysis.diagnostics import compute_moments, relative_error
    from erpic.analysis.plots import show_convergence
    from erpic.integrators.regimes import regime_coefficients
    from erpic.integrators.relaxation import SCHEMES
    from erpic.integrators.rk4 import rk4_reference
    from erpic.integrators.state import FieldSolver, SimState
    from erpic.physics.sampling import sample_ensemble
    from erpic.utils.errors import ConfigError, ConfigViolation, ReferenceConvergenceError
    from erpic.utils.helpers import step_count, worker_count, write_csv
    from erpic.runner.config import SimulationConfig

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

ERROR_COLUMNS = ["eps", "dt", "err_rho_rhov", "order"]
REFERENCE_RATIO = 50
# relative slack when checking that a step divides the horizon
HORIZON_TOL = 1e-9


def divides_horizon(horizon, dt):
    """True when horizon is an integer multiple of dt up to rounding."""
    ratio = horizon / dt
    return abs(ratio - round(ratio)) <= HORIZON_TOL * max(1.0, ratio)


@dataclass(frozen=True)
class ConvergenceSpec:
    base: SimulationConfig
    eps_list: Sequence[float]
    dt_list: Sequence[float]
    dt_ref: Optional[float] = None
    scheme: Optional[str] = None

    def __post_init__(self):
        violations = []
        if not self.eps_list:
            violations.append(ConfigViolation(None, "eps_list", "at least one eps is required"))
        if not self.dt_list:
            violations.append(ConfigViolation(None, "dt_list", "at least one dt is required"))
        for eps in self.eps_list:
            if not 0.0 < eps <= 1.0:
                violations.append(ConfigViolation(None, "eps_list", f"eps must be in (0, 1], got {eps}"))
        for dt in self.dt_list:
            if not dt > 0.0:
                violations.append(ConfigViolation(None, "dt_list", f"dt must be > 0, got {dt}"))
        if self.scheme not in (None, *SCHEMES):
            violations.append(ConfigViolation(None, "scheme", f"must be one of {list(SCHEMES)}, got {self.scheme}"))
        if not violations and self.reference_dt > min(self.dt_list) / REFERENCE_RATIO:
            violations.append(ConfigViolation(
                None, "reference.dt",
                f"must be <= min(dt)/{REFERENCE_RATIO} = {min(self.dt_list) / REFERENCE_RATIO}, "
                f"got {self.reference_dt}"))
        if not violations:
            violations.extend(self._horizon_violations())
        if violations:
            raise ConfigError(violations)

    def _horizon_violations(self):
        """Every studied step and the reference pair must land exactly on the horizon of each eps."""
        violations = []
        steps = [("dt_list", dt) for dt in self.dt_list]
        steps += [("reference.dt", self.reference_dt), ("reference.dt", 2.0 * self.reference_dt)]
        for eps in self.eps_list:
            horizon = regime_coefficients(self.base.regime, eps).horizon(self.base.t_final)
            for key, dt in steps:
                if not divides_horizon(horizon, dt):
                    violations.append(ConfigViolation(
                        None, key, f"step {dt} does not divide the horizon {horizon:g} at eps = {eps}; "
                                   f"the runs would stop at {step_count(horizon, dt) * dt:g}"))
        return violations

    @property
    def reference_dt(self):
        return self.base.reference.dt if self.dt_ref is None else self.dt_ref

    @property
    def scheme_name(self):
        if self.scheme is not None:
            return self.scheme
        return self.base.scheme if self.base.scheme in SCHEMES else "RS2"


def _convergence_cell(base: SimulationConfig, eps, dt_list, dt_ref, scheme, guard_tol):
    """All rows of one eps value: reference, guard and one run per dt."""
    config = replace(base, eps=eps)
    coeffs = config.coeffs
    model = config.build_model()
    grid = config.build_grid()
    ensemble = sample_ensemble(config.build_distribution(), config.init.particles, config.init.seed)
    start = SimState.initial(ensemble, FieldSolver(grid), coeffs.lam)
    horizon = config.horizon

    n_ref = step_count(horizon, dt_ref)
    logger.info(f"eps = {eps}: RK4 reference with {n_ref} steps of {dt_ref}")
    reference = compute_moments(rk4_reference(start, dt_ref, n_ref, coeffs, model, log_every=max(n_ref // 10, 1)))
    coarse = compute_moments(rk4_reference(start, 2.0 * dt_ref, step_count(horizon, 2.0 * dt_ref), coeffs, model))
    guard = relative_error(coarse, reference)
    if guard > guard_tol:
        raise ReferenceConvergenceError(
            f"RK4 reference not converged at eps = {eps}: difference {guard:.3e} between dt_ref = {dt_ref} "
            f"and 2*dt_ref exceeds {guard_tol:.1e}")
    logger.info(f"eps = {eps}: reference guard {guard:.3e}")

    step = SCHEMES[scheme]
    rows = []
    prev = None
    for dt in dt_list:
        state = start
        for _ in range(step_count(horizon, dt)):
            state, _record = step(state, dt, coeffs, model)
        err = relative_error(compute_moments(state), reference)
        order = math.nan
        if prev is not None and err > 0.0 and prev[1] > 0.0 and prev[0] != dt:
            order = math.log(prev[1] / err) / math.log(prev[0] / dt)
        rows.append({"eps": eps, "dt": dt, "err_rho_rhov": err, "order": order})
        logger.info(f"eps = {eps}, dt = {dt}: error {err:.3e}, order {order:.2f}")
        prev = (dt, err)
    return rows


def _check_monotone(table: pd.DataFrame):
    for eps, rows in table.groupby("eps", sort=False):
        rows = rows.sort_values("dt", ascending=False)
        errs = rows["err_rho_rhov"].to_numpy()
        increases = int(np.sum(np.diff(errs) > 0.0))
        if increases:
            logger.warning(f"eps = {eps}: error does not decrease monotonically with dt "
                           f"({increases} increase(s))")


def run_convergence(spec: ConvergenceSpec, output_dir=None) -> pd.DataFrame:
    """
    Run the convergence study and write errors.csv.

    Parameters:
    - spec: ConvergenceSpec
    - output_dir: str or Path, overrides spec.base.output.directory

    Return: DataFrame with columns eps, dt, err_rho_rhov, order
    """
    out = Path(output_dir if output_dir is not None else spec.base.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    scheme = spec.scheme_name
    dt_list = list(spec.dt_list)
    args = [(spec.base, float(eps), dt_list, spec.reference_dt, scheme, spec.base.reference.guard_tol)
            for eps in spec.eps_list]
    workers = min(worker_count(), len(args))
    logger.info(f"Convergence study: {scheme}, eps {list(spec.eps_list)}, dt {dt_list}, "
                f"dt_ref {spec.reference_dt}, {workers} worker(s)")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_convergence_cell, *zip(*args)))
    else:
        results = [_convergence_cell(*a) for a in args]

    table = pd.DataFrame([row for rows in results for row in rows], columns=ERROR_COLUMNS)
    _check_monotone(table)
    write_csv(table, out / "errors.csv")
    logger.info(f"Errors written to {out / 'errors.csv'}")
    if spec.base.output.plots:
        show_convergence(table, plot_title=f"{scheme} error against RK4, {spec.base.regime}") \
            .write_html(out / "convergence.html")
    return table
