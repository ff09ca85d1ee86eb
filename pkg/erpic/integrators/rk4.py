"""
Classical RK4 reference integrator for the coupled particle system

    dx/ds = v,   dv/ds = kappa_B v x B(x) + kappa_E E[x](x)

The field is re-solved from the full position vector at every stage, so the
right-hand side is a function of the particle state alone.
"""

import logging

import numpy as np

try:
    # When used as a package
    from ..physics.magnetic import MagneticModel, lorentz_term
    from .regimes import RegimeCoefficients
    from .state import SimState, pad_kick
except ImportError:
    # When used as standalone
    from erpic.physics.magnetic import MagneticModel, lorentz_term
    from erpic.integrators.regimes import RegimeCoefficients
    from erpic.integrators.state import SimState, pad_kick

logger = logging.getLogger(__name__)


def _rhs(x, v, weights, evaluator, coeffs, model):
    pts = evaluator.wrap(x)
    field = evaluator.solve(pts, weights)
    E = pad_kick(evaluator.at(field, pts), v.shape[1])
    dv = coeffs.kappa_B * lorentz_term(model, pts, v, coeffs.eps) + coeffs.kappa_E * E
    return v[:, :2], dv


def rk4_reference(state: SimState, h_ref, n_steps, coeffs: RegimeCoefficients, model: MagneticModel,
                  log_every=0) -> SimState:
    """
    Advance a state by n_steps classical RK4 steps of size h_ref.

    Parameters:
    - state: SimState
    - h_ref: float, step size, > 0
    - n_steps: int, number of steps
    - coeffs: RegimeCoefficients
    - model: MagneticModel
    - log_every: int, log progress every this many steps (0 = never)

    Return: SimState at time state.time + n_steps*h_ref, with field and energy recomputed
    """
    if not h_ref > 0:
        raise ValueError(f"Invalid reference step size: {h_ref}. Must be > 0")
    evaluator = state.evaluator
    weights = state.ensemble.weights
    x = state.positions.copy()
    v = state.velocities.copy()
    for n in range(int(n_steps)):
        k1x, k1v = _rhs(x, v, weights, evaluator, coeffs, model)
        k2x, k2v = _rhs(x + 0.5 * h_ref * k1x, v + 0.5 * h_ref * k1v, weights, evaluator, coeffs, model)
        k3x, k3v = _rhs(x + 0.5 * h_ref * k2x, v + 0.5 * h_ref * k2v, weights, evaluator, coeffs, model)
        k4x, k4v = _rhs(x + h_ref * k3x, v + h_ref * k3v, weights, evaluator, coeffs, model)
        x = evaluator.wrap(x + h_ref / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x))
        v = v + h_ref / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if log_every and (n + 1) % log_every == 0:
            logger.info(f"Reference progress: {n + 1}/{n_steps} steps")
    ensemble = state.ensemble.with_state(x, v)
    return SimState.initial(ensemble, evaluator, coeffs.lam, state.time + n_steps * h_ref,
                            state.step_index + int(n_steps))
