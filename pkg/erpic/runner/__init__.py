"""Run configuration, presets, the simulation loop, convergence studies and the command line"""

from .config import (SimulationConfig, GridConfig, InitConfig, MagneticConfig, OutputConfig, ReferenceConfig,
                     SCHEME_NAMES, parse_config, render_config, apply_overrides, load_config)
from .presets import PRESETS, SCALES, preset, render_preset
from .simulation import Simulation, SimulationResult, run_simulation
from .convergence import ConvergenceSpec, run_convergence

__all__ = [
    'SimulationConfig',
    'GridConfig',
    'InitConfig',
    'MagneticConfig',
    'OutputConfig',
    'ReferenceConfig',
    'SCHEME_NAMES',
    'parse_config',
    'render_config',
    'apply_overrides',
    'load_config',
    'PRESETS',
    'SCALES',
    'preset',
    'render_preset',
    'Simulation',
    'SimulationResult',
    'run_simulation',
    'ConvergenceSpec',
    'run_convergence',
]
