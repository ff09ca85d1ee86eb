"""
erpic - Energy-relaxed particle-in-cell solver for the strongly magnetized Vlasov-Poisson system
"""

__version__ = "1.0.0"

from .mesh import Grid2D, ParticleEnsemble
from .integrators import SimState, step_rs1, step_rs2, rk4_reference, regime_coefficients
from .runner import SimulationConfig, Simulation, run_simulation, run_convergence, preset

__all__ = [
    'Grid2D',
    'ParticleEnsemble',
    'SimState',
    'step_rs1',
    'step_rs2',
    'rk4_reference',
    'regime_coefficients',
    'SimulationConfig',
    'Simulation',
    'run_simulation',
    'run_convergence',
    'preset',
]
