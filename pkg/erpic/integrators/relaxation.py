"""
Energy-conserving explicit relaxation steppers

psi1 is the exact rotation flow of dv/ds = kappa_B v x B(x) with x frozen.
psi2 is a Stormer-Verlet step for dx/ds = v, dv/ds = kappa_E E(x) whose final
velocity kick is scaled by (1 + gamma), gamma chosen per step so that the
discrete total energy is exactly that of the step's input.

RS1 = psi2(h) after psi1(h) (Lie-Trotter, first order)
RS2 = psi1(h/2) after psi2(h) after psi1(h/2) (Strang, second order)
"""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

try:
    # When used as a package
    from ..physics.magnetic import MagneticModel, rotate_velocity
    from .regimes import RegimeCoefficients
    from .state import Branch, SimState, StepRecord, kinetic_energy, pad_kick
except ImportError:
    # When used as standalone
    from erpic.physics.magnetic import MagneticModel, rotate_velocity
    from erpic.integrators.regimes import RegimeCoefficients
    from erpic.integrators.state import Branch, SimState, StepRecord, kinetic_energy, pad_kick

logger = logging.getLogger(__name__)

# DegenerateA threshold relative to sum(w) * max(1, max |E(X1)|^2)
A_TOL_FACTOR = 1e-28


@dataclass
class Prediction:
    """Unrelaxed psi2 update: midpoint positions, new positions, kicked velocities and fields."""
    X1: np.ndarray
    x_new: np.ndarray
    v_tilde: np.ndarray
    E_X1: np.ndarray
    E_new: object


def psi1_step(state: SimState, h, coeffs: RegimeCoefficients, model: MagneticModel) -> SimState:
    """
    Rotate every velocity by the exact magnetic flow over h.

    Positions, field and field energy are untouched; H is recomputed from the
    rotated velocities.
    """
    if h == 0:
        return state
    v_new = rotate_velocity(model, state.positions, state.velocities, coeffs.kappa_B * h, coeffs.eps)
    return state.with_velocities(v_new)


def psi2_predict(state: SimState, h, coeffs: RegimeCoefficients) -> Prediction:
    """
    Stormer-Verlet update without relaxation.

    X1 = x + h/2 v, E_X1 = E[X1](X1), x_new = x + h v + h^2/2 kappa_E E_X1,
    v_tilde = v + h kappa_E E_X1, E_new = E[x_new]. Two field solves.

    Parameters:
    - state: SimState
    - h: float, step size, > 0
    - coeffs: RegimeCoefficients
    """
    if not h > 0:
        raise ValueError(f"Invalid step size: {h}. Must be > 0")
    evaluator = state.evaluator
    weights = state.ensemble.weights
    x, v = state.positions, state.velocities
    v_plane = v[:, :2]

    X1 = evaluator.wrap(x + 0.5 * h * v_plane)
    field_X1 = evaluator.solve(X1, weights)
    E_X1 = evaluator.at(field_X1, X1)

    x_new = evaluator.wrap(x + h * v_plane + 0.5 * h * h * coeffs.kappa_E * E_X1)
    v_tilde = v + h * coeffs.kappa_E * pad_kick(E_X1, v.shape[1])
    E_new = evaluator.solve(x_new, weights)
    return Prediction(X1, x_new, v_tilde, E_X1, E_new)


def relaxation_gamma(A, C, H_tilde, h, kappa_E, a_tol=0.0):
    """
    Relaxation parameter restoring the energy of a psi2 step.

    With v_new = v_tilde + g E_X1, g = h gamma kappa_E, the energy condition is
    H_tilde + g C + g^2 A/2 = 0. The root picked is g = (-C + sgn(C) sqrt(D))/A,
    D = C^2 - 2 A H_tilde, sgn(0) = +1, evaluated in the cancellation-free form
    g = -2 H_tilde / (C + sgn(C) sqrt(D)).

    Parameters:
    - A: float, sum w |E_X1|^2
    - C: float, sum w E_X1 . v_tilde
    - H_tilde: float, energy change of the unrelaxed step
    - h: float, step size
    - kappa_E: float, electric-kick multiplier
    - a_tol: float, A at or below this value is treated as zero

    Return: (gamma, Branch, discriminant D)
    """
    D = C * C - 2.0 * A * H_tilde
    if A <= a_tol:
        return 0.0, Branch.DEGENERATE_A, D
    if D < 0:
        return 0.0, Branch.NEGATIVE_DISCRIMINANT, D
    sgn = 1.0 if C >= 0 else -1.0
    denominator = h * kappa_E * (C + sgn * math.sqrt(D))
    if denominator == 0:
        return 0.0, Branch.REAL_ROOT, D
    return -2.0 * H_tilde / denominator, Branch.REAL_ROOT, D


def psi2_step(state: SimState, h, coeffs: RegimeCoefficients):
    """
    Relaxed Stormer-Verlet step; advances time by h and the step index by one.

    Return: (SimState, StepRecord)
    """
    pred = psi2_predict(state, h, coeffs)
    weights = state.ensemble.weights
    evaluator = state.evaluator

    W_new = evaluator.energy(pred.E_new, coeffs.lam)
    H_tilde = kinetic_energy(weights, pred.v_tilde) + W_new - state.H

    kick = pad_kick(pred.E_X1, pred.v_tilde.shape[1])
    kick_sq = np.sum(kick ** 2, axis=1)
    A = float(np.sum(weights * kick_sq))
    C = float(np.sum(weights * np.sum(kick * pred.v_tilde, axis=1)))
    scale = max(1.0, float(np.max(kick_sq))) if kick_sq.size else 1.0
    a_tol = A_TOL_FACTOR * float(np.sum(weights)) * scale
    gamma, branch, D = relaxation_gamma(A, C, H_tilde, h, coeffs.kappa_E, a_tol)

    v_new = pred.v_tilde + (h * gamma * coeffs.kappa_E) * kick if gamma != 0.0 else pred.v_tilde
    ensemble = state.ensemble.with_state(pred.x_new, v_new)
    H_new = kinetic_energy(weights, v_new) + W_new
    new_state = SimState(ensemble, state.time + h, pred.E_new, W_new, H_new,
                         state.step_index + 1, evaluator)
    record = StepRecord(new_state.step_index, new_state.time, H_new, gamma, branch, D)
    if branch != Branch.REAL_ROOT:
        logger.debug(f"Step {record.step_index}: {branch.name}, A={A:.3e}, D={D:.3e}, H_tilde={H_tilde:.3e}")
    return new_state, record


def _identity_record(state: SimState):
    return StepRecord(state.step_index, state.time, state.H, 0.0, Branch.REAL_ROOT, 0.0)


def step_rs1(state: SimState, h, coeffs: RegimeCoefficients, model: MagneticModel):
    """Lie-Trotter composition psi2(h) o psi1(h). Return: (SimState, StepRecord)"""
    if h == 0:
        return state, _identity_record(state)
    return psi2_step(psi1_step(state, h, coeffs, model), h, coeffs)


def step_rs2(state: SimState, h, coeffs: RegimeCoefficients, model: MagneticModel):
    """Strang composition psi1(h/2) o psi2(h) o psi1(h/2). Return: (SimState, StepRecord)"""
    if h == 0:
        return state, _identity_record(state)
    half = psi1_step(state, 0.5 * h, coeffs, model)
    mid, record = psi2_step(half, h, coeffs)
    final = psi1_step(mid, 0.5 * h, coeffs, model)
    return final, replace(record, H=final.H)


SCHEMES = {
    "RS1": step_rs1,
    "RS2": step_rs2,
}
