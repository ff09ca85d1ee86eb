"""
Observables and error metrics: total energy, moments, velocity marginal, errors
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy import fft

try:
    # When used as a package
    from ..mesh import Grid2D, ScalarField, axis_stencil, deposit_weights, interpolate_scalar
    from ..integrators.state import SimState, StepRecord, kinetic_energy
    from ..integrators.regimes import RegimeCoefficients
except ImportError:
    # When used as standalone
    from erpic.mesh import Grid2D, ScalarField, axis_stencil, deposit_weights, interpolate_scalar
    from erpic.integrators.state import SimState, StepRecord, kinetic_energy
    from erpic.integrators.regimes import RegimeCoefficients

logger = logging.getLogger(__name__)

ENERGY_COLUMNS = ["step", "time", "H", "relH_err", "gamma", "branch", "discriminant"]


@dataclass
class MomentSet:
    """
    Parameters:
    - rho: ScalarField, charge density
    - rho_v: ScalarField, density of |v|^2
    - time: float
    """
    rho: ScalarField
    rho_v: ScalarField
    time: float = 0.0


@dataclass
class VelocityMarginal:
    """
    Velocity profile chi(v) on the nodes v_lo + i*dv, i = 0..nv-1, in both components.

    Parameters:
    - v_lo, v_hi: float, box bounds (both are nodes)
    - values: array (nv, nv), values[i, j] at (v1_i, v2_j)
    - escaped: int, particles whose stencil left the box (not deposited)
    - time: float
    """
    v_lo: float
    v_hi: float
    values: np.ndarray
    escaped: int = 0
    time: float = 0.0

    @property
    def nv(self):
        return self.values.shape[0]

    @property
    def dv(self):
        return (self.v_hi - self.v_lo) / (self.nv - 1)

    def nodes(self):
        return self.v_lo + np.arange(self.nv) * self.dv

    def mass(self):
        return float(np.sum(self.values)) * self.dv ** 2


def _grid_of(state: SimState, grid: Optional[Grid2D]):
    grid = grid if grid is not None else getattr(state.evaluator, "grid", None)
    if grid is None:
        raise ValueError("A grid is required for moments of a state without a grid-based field")
    return grid


def total_energy(state: SimState, coeffs: RegimeCoefficients) -> float:
    """1/2 sum w |v|^2 plus the lam-weighted field energy of the cached field."""
    return kinetic_energy(state.ensemble.weights, state.velocities) + \
        state.evaluator.energy(state.field, coeffs.lam)


def compute_moments(state: SimState, grid: Optional[Grid2D] = None) -> MomentSet:
    """
    Deposit rho (weights w) and rho_v (weights w |v|^2) on the grid.

    Parameters:
    - state: SimState
    - grid: Grid2D, defaults to the grid of the state's field solver
    """
    grid = _grid_of(state, grid)
    w = state.ensemble.weights
    speed2 = np.sum(state.velocities ** 2, axis=1)
    rho = deposit_weights(state.positions, w, grid)
    rho_v = deposit_weights(state.positions, w * speed2, grid)
    return MomentSet(ScalarField(grid, rho), ScalarField(grid, rho_v), state.time)


def velocity_marginal(state: SimState, nv=64, v_max=6.0) -> VelocityMarginal:
    """
    Deposit the particle weights on a velocity grid over [-v_max, v_max]^2.

    The quintic kernel of the spatial deposition is reused on a non-periodic grid
    whose end nodes sit on the box boundary. Particles whose stencil leaves the
    grid are counted as escapees and skipped.

    Parameters:
    - state: SimState with 2D velocities
    - nv: int, nodes per axis, >= 8
    - v_max: float, half width of the box
    """
    if nv < 8 or not v_max > 0:
        raise ValueError(f"Invalid velocity grid: nv={nv}, v_max={v_max}. Must have nv >= 8, v_max > 0")
    v = state.velocities
    if v.shape[1] != 2:
        raise ValueError(f"Invalid velocity dimension for the marginal: {v.shape[1]}. Must be 2")
    w = state.ensemble.weights
    v_lo, v_hi = -float(v_max), float(v_max)
    dv = (v_hi - v_lo) / (nv - 1)

    i1, w1 = axis_stencil(v[:, 0], v_lo, dv, nv, periodic=False)
    i2, w2 = axis_stencil(v[:, 1], v_lo, dv, nv, periodic=False)
    inside = (i1.min(axis=1) >= 0) & (i1.max(axis=1) < nv) & (i2.min(axis=1) >= 0) & (i2.max(axis=1) < nv)
    escaped = int(np.count_nonzero(~inside))
    if escaped:
        logger.warning(f"Velocity marginal: {escaped} particles outside [{v_lo}, {v_hi}]^2 were skipped")

    i1, w1, i2, w2, wk = i1[inside], w1[inside], i2[inside], w2[inside], w[inside]
    flat = (i1[:, :, None] * nv + i2[:, None, :]).ravel()
    contrib = (wk[:, None, None] * w1[:, :, None] * w2[:, None, :]).ravel()
    chi = np.bincount(flat, weights=contrib, minlength=nv * nv).reshape(nv, nv) / dv ** 2
    return VelocityMarginal(v_lo, v_hi, chi, escaped, state.time)


def relative_error(num: MomentSet, ref: MomentSet) -> float:
    """
    err_rho + err_rho_v in the maximum norm, each relative to the reference.
    """
    if num.rho.values.shape != ref.rho.values.shape:
        raise ValueError(f"Moment grids differ: {num.rho.values.shape} vs {ref.rho.values.shape}")
    rho_scale = ref.rho.max_norm()
    rhov_scale = ref.rho_v.max_norm()
    if rho_scale == 0 or rhov_scale == 0:
        raise ValueError("Reference moments have zero maximum norm")
    return (num.rho - ref.rho).max_norm() / rho_scale + (num.rho_v - ref.rho_v).max_norm() / rhov_scale


def energy_error_series(records: Sequence, H0: Optional[float] = None) -> np.ndarray:
    """
    Relative energy errors |H_n - H0|/|H0|.

    Parameters:
    - records: sequence of StepRecord or of floats (energies)
    - H0: float, reference energy; defaults to the first entry
    """
    H = np.array([r.H if isinstance(r, StepRecord) else float(r) for r in records], dtype=float)
    if H0 is None:
        if H.size == 0:
            return H
        H0 = H[0]
    if H0 == 0:
        raise ValueError("Relative energy error undefined for H0 = 0")
    return np.abs(H - H0) / abs(H0)


def energy_frame(records: Sequence[StepRecord], H0: float) -> pd.DataFrame:
    """StepRecord series as the energy.csv table."""
    rel = energy_error_series(records, H0)
    rows = [{
        "step": r.step_index,
        "time": r.time,
        "H": r.H,
        "relH_err": e,
        "gamma": r.gamma,
        "branch": int(r.branch),
        "discriminant": r.discriminant,
    } for r, e in zip(records, rel)]
    return pd.DataFrame(rows, columns=ENERGY_COLUMNS)


def angular_mode_spectrum(rho: ScalarField, center=(0.0, 0.0), radius=6.5, n_theta=256, n_modes=10):
    """
    Amplitudes of the angular Fourier modes of a field sampled on a ring.

    Parameters:
    - rho: ScalarField
    - center: (x, y), ring center
    - radius: float, ring radius
    - n_theta: int, samples on the ring
    - n_modes: int, highest mode returned

    Return: array (n_modes + 1,), |c_m| for m = 0..n_modes
    """
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    ring = np.column_stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)])
    samples = interpolate_scalar(rho, ring)
    coeffs = fft.rfft(samples) / n_theta
    return np.abs(coeffs[:n_modes + 1])
