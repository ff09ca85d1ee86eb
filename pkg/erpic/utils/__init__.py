"""Utility and helper modules"""

from .errors import (ErpicError, ConfigViolation, ConfigError, NumericalError, SamplingError,
                     ReferenceConvergenceError)
from .helpers import step_count, setup_logging, worker_count, write_csv, require_finite

__all__ = [
    'ErpicError',
    'ConfigViolation',
    'ConfigError',
    'NumericalError',
    'SamplingError',
    'ReferenceConvergenceError',
    'step_count',
    'setup_logging',
    'worker_count',
    'write_csv',
    'require_finite',
]
