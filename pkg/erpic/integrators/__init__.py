"""Scaling regimes, simulation state and the relaxation time steppers"""

from .regimes import RegimeCoefficients, regime_coefficients, FLUID, LARMOR, DIFFUSION, REGIMES
from .state import Branch, StepRecord, SimState, FieldSolver, PrescribedField
from .relaxation import (Prediction, psi1_step, psi2_predict, relaxation_gamma, psi2_step,
                         step_rs1, step_rs2, SCHEMES)
from .rk4 import rk4_reference

__all__ = [
    'RegimeCoefficients',
    'regime_coefficients',
    'FLUID',
    'LARMOR',
    'DIFFUSION',
    'REGIMES',
    'Branch',
    'StepRecord',
    'SimState',
    'FieldSolver',
    'PrescribedField',
    'Prediction',
    'psi1_step',
    'psi2_predict',
    'relaxation_gamma',
    'psi2_step',
    'step_rs1',
    'step_rs2',
    'SCHEMES',
    'rk4_reference',
]
