"""
Scaling regimes of the strongly magnetized Vlasov-Poisson system

All three regimes share the particle equations
    dx/ds = v,   dv/ds = kappa_B * v x B(x) + kappa_E * E(x)
in their own time variable s, and conserve
    H = 1/2 sum_k w_k |v_k|^2 + (lam/2) int |E|^2,   lam = kappa_E.
"""

from dataclasses import dataclass

FLUID = "fluid"
LARMOR = "larmor"
DIFFUSION = "diffusion"

REGIMES = [FLUID, LARMOR, DIFFUSION]


@dataclass(frozen=True)
class RegimeCoefficients:
    """
    Parameters:
    - regime: str, one of REGIMES
    - eps: float, strength parameter of the magnetic field, 0 < eps <= 1
    - kappa_B: float, rotation-strength multiplier
    - kappa_E: float, electric-kick multiplier
    - lam: float, field-energy weight of the conserved functional
    - horizon_factor: float, integration horizon = horizon_factor * t_final
    """
    regime: str
    eps: float
    kappa_B: float
    kappa_E: float
    lam: float
    horizon_factor: float

    @property
    def rescaled(self):
        return self.regime != FLUID

    @property
    def time_variable(self):
        return "tau" if self.rescaled else "t"

    def horizon(self, t_final):
        """Length of the run in the integration time variable."""
        return t_final * self.horizon_factor

    def physical_time(self, s):
        """Physical time t for integration time s (t = eps*tau in rescaled regimes)."""
        return s * self.eps if self.rescaled else s


def regime_coefficients(regime, eps) -> RegimeCoefficients:
    """
    Coefficients (kappa_B, kappa_E, lam) of a scaling regime.

    Parameters:
    - regime: str, "fluid", "larmor" or "diffusion"
    - eps: float, 0 < eps <= 1
    """
    if regime not in REGIMES:
        raise ValueError(f"Invalid regime: {regime}. Available: {REGIMES}")
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"Invalid eps: {eps}. Must satisfy 0 < eps <= 1")
    if regime == FLUID:
        return RegimeCoefficients(FLUID, eps, 1.0 / eps, 1.0, 1.0, 1.0)
    if regime == LARMOR:
        return RegimeCoefficients(LARMOR, eps, 1.0, eps, eps, 1.0 / eps)
    return RegimeCoefficients(DIFFUSION, eps, 1.0 / eps, 1.0, 1.0, 1.0 / eps)
