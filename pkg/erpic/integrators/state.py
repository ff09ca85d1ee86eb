"""
Simulation state, per-step records and field evaluators

A field evaluator turns particle positions into the electric field felt by the
particles. FieldSolver is the self-consistent PIC pipeline (deposit, spectral
Poisson solve, interpolate). PrescribedField wraps an external E(x) with zero
field energy and is used for single-particle and manufactured-solution runs.
"""

import logging
from dataclasses import dataclass, replace
from enum import IntEnum
from typing import Callable, Optional

import numpy as np

try:
    # When used as a package
    from ..mesh import (Grid2D, VectorField2D, ParticleEnsemble, deposit_weights, interpolate_field,
                        solve_poisson, field_energy)
    from ..mesh.grid import ScalarField
    from ..utils.errors import NumericalError
except ImportError:
    # When used as standalone
    from erpic.mesh import (Grid2D, VectorField2D, ParticleEnsemble, deposit_weights, interpolate_field,
                            solve_poisson, field_energy)
    from erpic.mesh.grid import ScalarField
    from erpic.utils.errors import NumericalError

logger = logging.getLogger(__name__)


class Branch(IntEnum):
    """Root branch taken by the relaxation parameter, as written to energy.csv."""
    REAL_ROOT = 0
    NEGATIVE_DISCRIMINANT = 1
    DEGENERATE_A = 2


@dataclass(frozen=True)
class StepRecord:
    step_index: int
    time: float
    H: float
    gamma: float
    branch: Branch
    discriminant: float


class FieldSolver:
    """
    Self-consistent field on a periodic grid.

    Parameters:
    - grid: Grid2D
    """

    def __init__(self, grid: Grid2D):
        self.grid = grid

    def wrap(self, positions):
        return self.grid.wrap(positions)

    def solve(self, positions, weights) -> VectorField2D:
        rho = deposit_weights(positions, weights, self.grid)
        return solve_poisson(ScalarField(self.grid, rho))

    def at(self, field: VectorField2D, positions):
        return interpolate_field(field, positions)

    def energy(self, field: VectorField2D, lam):
        return field_energy(field, lam)

    def __repr__(self):
        return f"FieldSolver({self.grid})"


class PrescribedField:
    """
    External electric field E(x), independent of the particles.

    Parameters:
    - fn: callable mapping positions (n, 2) to field values (n, 2)
    - grid: optional Grid2D; when given, positions are wrapped into its periodic box
    """

    def __init__(self, fn: Callable, grid: Optional[Grid2D] = None):
        self.fn = fn
        self.grid = grid

    def wrap(self, positions):
        return positions if self.grid is None else self.grid.wrap(positions)

    def solve(self, positions, weights):
        return None

    def at(self, field, positions):
        return np.asarray(self.fn(np.asarray(positions, dtype=float)), dtype=float).reshape(-1, 2)

    def energy(self, field, lam):
        return 0.0

    @classmethod
    def zero(cls, grid: Optional[Grid2D] = None):
        return cls(lambda x: np.zeros((x.shape[0], 2)), grid)

    def __repr__(self):
        return f"PrescribedField({getattr(self.fn, '__name__', 'fn')})"


def pad_kick(E_values, dim):
    """Embed in-plane field values (n, 2) into d velocity components."""
    if dim == 2:
        return E_values
    return np.column_stack([E_values, np.zeros(E_values.shape[0])])


def kinetic_energy(weights, velocities):
    return 0.5 * float(np.sum(weights * np.sum(velocities ** 2, axis=1)))


@dataclass
class SimState:
    """
    Parameters:
    - ensemble: ParticleEnsemble
    - time: float, current time in the integration variable (t or tau)
    - field: VectorField2D or None, field of the current positions
    - W: float, field energy of `field` with the regime weight lam
    - H: float, total energy of the state
    - step_index: int
    - evaluator: FieldSolver or PrescribedField
    """
    ensemble: ParticleEnsemble
    time: float
    field: Optional[VectorField2D]
    W: float
    H: float
    step_index: int
    evaluator: object

    @classmethod
    def initial(cls, ensemble: ParticleEnsemble, evaluator, lam, time=0.0, step_index=0):
        """Solve the field of the ensemble and build the state with its energy."""
        positions = evaluator.wrap(ensemble.positions)
        if positions is not ensemble.positions:
            ensemble = ensemble.with_state(positions, ensemble.velocities)
        field = evaluator.solve(ensemble.positions, ensemble.weights)
        W = evaluator.energy(field, lam)
        H = kinetic_energy(ensemble.weights, ensemble.velocities) + W
        return cls(ensemble, float(time), field, W, H, step_index, evaluator)

    @property
    def positions(self):
        return self.ensemble.positions

    @property
    def velocities(self):
        return self.ensemble.velocities

    def kinetic_energy(self):
        return kinetic_energy(self.ensemble.weights, self.ensemble.velocities)

    def with_velocities(self, velocities):
        """Same positions and field, new velocities; the kinetic part of H is recomputed."""
        ensemble = self.ensemble.with_state(self.ensemble.positions, velocities)
        H = kinetic_energy(ensemble.weights, velocities) + self.W
        return replace(self, ensemble=ensemble, H=H)

    def check_consistency(self, lam, rtol=1e-12):
        """
        Recompute the cached field and energy from scratch and compare.

        Raise: NumericalError when the caches drifted from the stored positions
        """
        fresh = SimState.initial(self.ensemble, self.evaluator, lam, self.time, self.step_index)
        if self.field is not None:
            scale = max(1.0, float(np.max(np.abs(fresh.field.e1))), float(np.max(np.abs(fresh.field.e2))))
            drift = max(float(np.max(np.abs(fresh.field.e1 - self.field.e1))),
                        float(np.max(np.abs(fresh.field.e2 - self.field.e2))))
            if drift > rtol * scale:
                raise NumericalError(f"Cached field drifted by {drift:.3e}", self.step_index)
        if abs(fresh.H - self.H) > rtol * max(1.0, abs(fresh.H)):
            raise NumericalError(f"Cached energy {self.H!r} differs from recomputed {fresh.H!r}",
                                 self.step_index)
        return True
