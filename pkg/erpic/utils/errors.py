"""
Exception hierarchy for erpic

Argument-level contract violations raise plain ValueError. The classes below
carry the extra context the runner needs to pick an exit code and to point the
user at a state dump.
"""

from dataclasses import dataclass
from typing import List, Optional


class ErpicError(Exception):
    """Base class for all erpic errors."""


@dataclass(frozen=True)
class ConfigViolation:
    line: Optional[int]
    key: Optional[str]
    message: str

    def __str__(self):
        where = f"line {self.line}" if self.line is not None else "config"
        if self.key:
            where = f"{where} ({self.key})"
        return f"{where}: {self.message}"


class ConfigError(ErpicError, ValueError):
    """
    Raised when a configuration text fails validation.

    Parameters:
    - violations: list of ConfigViolation, every problem found (not just the first)
    """

    def __init__(self, violations: List[ConfigViolation]):
        self.violations = list(violations)
        lines = "\n  ".join(str(v) for v in self.violations)
        super().__init__(f"{len(self.violations)} configuration error(s):\n  {lines}")


class NumericalError(ErpicError, RuntimeError):
    """
    Raised when a simulation cannot continue.

    Parameters:
    - message: str, what went wrong
    - step_index: int or None, step at which the run stopped
    - dump_path: str or None, binary ensemble dump written before aborting
    """

    def __init__(self, message: str, step_index: Optional[int] = None,
                 dump_path: Optional[str] = None):
        self.step_index = step_index
        self.dump_path = dump_path
        detail = message
        if step_index is not None:
            detail = f"{detail} (step {step_index})"
        if dump_path is not None:
            detail = f"{detail}; state dumped to {dump_path}"
        super().__init__(detail)


class SamplingError(NumericalError):
    """Rejection sampler misconfiguration: envelope violated or acceptance too low."""


class ReferenceConvergenceError(NumericalError):
    """The RK4 reference failed its step-halving guard."""
