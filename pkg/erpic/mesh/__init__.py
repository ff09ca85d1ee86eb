"""Periodic mesh, particle storage and particle <-> grid transfers"""

from .grid import Grid2D, ScalarField, VectorField2D, MIN_CELLS
from .particles import ParticleEnsemble
from .shapes import (bspline_weights, axis_stencil, deposit_weights, deposit_density,
                     interpolate_field, interpolate_scalar)
from .poisson import solve_poisson, spectral_divergence, field_energy

__all__ = [
    'Grid2D',
    'ScalarField',
    'VectorField2D',
    'MIN_CELLS',
    'ParticleEnsemble',
    'bspline_weights',
    'axis_stencil',
    'deposit_weights',
    'deposit_density',
    'interpolate_field',
    'interpolate_scalar',
    'solve_poisson',
    'spectral_divergence',
    'field_energy',
]
