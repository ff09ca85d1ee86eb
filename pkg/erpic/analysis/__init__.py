"""Diagnostics, energy reports and plots"""

from .diagnostics import (MomentSet, VelocityMarginal, ENERGY_COLUMNS, total_energy, compute_moments,
                          velocity_marginal, relative_error, energy_error_series, energy_frame,
                          angular_mode_spectrum)
from .energy_report import EnergyReport
from .plots import show_field, show_velocity_marginal, show_energy_error, show_convergence

__all__ = [
    'MomentSet',
    'VelocityMarginal',
    'ENERGY_COLUMNS',
    'total_energy',
    'compute_moments',
    'velocity_marginal',
    'relative_error',
    'energy_error_series',
    'energy_frame',
    'angular_mode_spectrum',
    'EnergyReport',
    'show_field',
    'show_velocity_marginal',
    'show_energy_error',
    'show_convergence',
]
