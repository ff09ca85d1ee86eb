"""
External magnetic field models B(x) = B0 + eps*B1(x) and the exact rotation subflow

Two variants exist. A scalar 2D model carries b(x) = b0 + eps*b1(x), the third
component of a field normal to the plane. A 3D vector model carries a constant
B0 plus a bounded perturbation B1(x). Config files select scalar models by name,
see MODEL_REGISTRY.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

logger = logging.getLogger(__name__)

SCALAR_2D = "scalar2d"
VECTOR_3D = "vector3d"


@dataclass(frozen=True)
class MagneticModel:
    """
    Parameters:
    - name: str, model name as used in config files
    - kind: str, SCALAR_2D or VECTOR_3D
    - b0: float (2D) or 3-tuple (3D), constant part
    - perturbation: callable mapping positions (n, 2) to (n,) values (2D) or (n, 3) vectors (3D)
    - params: dict, the parameters the model was built from (echoed into manifests)
    """
    name: str
    kind: str
    b0: object
    perturbation: Callable
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in (SCALAR_2D, VECTOR_3D):
            raise ValueError(f"Invalid magnetic model kind: {self.kind}. Available: {[SCALAR_2D, VECTOR_3D]}")

    @property
    def dim(self):
        return 2 if self.kind == SCALAR_2D else 3

    @property
    def is_uniform(self):
        return bool(self.params.get("uniform", False))


def _example1_b1(x):
    return 1.0 + np.sin(x[:, 0]) * np.sin(x[:, 1]) / 2.0


def example1_model():
    """b(x) = 1 + eps*(1 + sin(x1) sin(x2)/2), the field of the two-bump experiment."""
    return MagneticModel("example1", SCALAR_2D, 1.0, _example1_b1, {"b0": 1.0})


def uniform_model(b0=1.0):
    """b(x) = b0 with no perturbation."""
    return MagneticModel("uniform", SCALAR_2D, float(b0),
                         lambda x: np.zeros(x.shape[0]), {"b0": float(b0), "uniform": True})


def constant_model(b0=1.0, b1=0.0):
    """b(x) = b0 + eps*b1 with both parts constant."""
    b1 = float(b1)
    return MagneticModel("custom-constant", SCALAR_2D, float(b0),
                         lambda x: np.full(x.shape[0], b1),
                         {"b0": float(b0), "b1": b1, "uniform": True})


def vector_model(b0=(0.0, 0.0, 1.0), perturbation: Optional[Callable] = None):
    """
    3D model B(x) = B0 + eps*B1(x).

    Parameters:
    - b0: 3-sequence, constant part
    - perturbation: callable (n, k) -> (n, 3), defaults to zero
    """
    b0 = tuple(float(c) for c in b0)
    if len(b0) != 3:
        raise ValueError(f"Invalid constant field: {b0}. Must have 3 components")
    uniform = perturbation is None
    if uniform:
        perturbation = lambda x: np.zeros((x.shape[0], 3))
    return MagneticModel("vector", VECTOR_3D, b0, perturbation, {"b0": list(b0), "uniform": uniform})


MODEL_REGISTRY = {
    "example1": lambda b0=None, b1=None: example1_model(),
    "uniform": lambda b0=None, b1=None: uniform_model(1.0 if b0 is None else b0),
    "custom-constant": lambda b0=None, b1=None: constant_model(1.0 if b0 is None else b0,
                                                               0.0 if b1 is None else b1),
}


def get_model(name, b0=None, b1=None):
    """
    Build a scalar model by config name.

    Parameters:
    - name: str, one of MODEL_REGISTRY
    - b0, b1: optional floats, used by "uniform" (b0) and "custom-constant" (b0, b1)
    """
    if name not in MODEL_REGISTRY:
        raise ValueError(f"Invalid magnetic model: {name}. Available: {list(MODEL_REGISTRY)}")
    return MODEL_REGISTRY[name](b0=b0, b1=b1)


def eval_field(model: MagneticModel, x, eps):
    """
    Evaluate b(x) (2D) or B(x) (3D).

    Parameters:
    - model: MagneticModel
    - x: array (2,) or (n, 2), positions
    - eps: float, perturbation scale

    Return: float or (n,) array for 2D models, (3,) or (n, 3) array for 3D models
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x.reshape(1, -1) if single else x
    if not np.all(np.isfinite(pts)):
        raise ValueError("Non-finite position passed to the magnetic field")
    pert = np.asarray(model.perturbation(pts), dtype=float)
    if not np.all(np.isfinite(pert)):
        raise ValueError(f"Position outside the domain of the '{model.name}' perturbation")
    if model.kind == SCALAR_2D:
        b = model.b0 + eps * pert.reshape(-1)
        return float(b[0]) if single else b
    B = np.asarray(model.b0)[None, :] + eps * pert.reshape(-1, 3)
    return B[0] if single else B


def skew_matrix(B):
    """
    Skew-symmetric matrix of B, with skew_matrix(B) @ v equal to cross(v, B).

    Parameters:
    - B: 3-vector

    Return: (3, 3) array with rows (0, b3, -b2), (-b3, 0, b1), (b2, -b1, 0)
    """
    b1, b2, b3 = (float(c) for c in np.asarray(B, dtype=float).reshape(3))
    return np.array([[0.0, b3, -b2],
                     [-b3, 0.0, b1],
                     [b2, -b1, 0.0]])


def rotate_2d(v, theta):
    """Apply exp(theta*J), J = [[0, 1], [-1, 0]], to each row of v."""
    c, s = np.cos(theta), np.sin(theta)
    out = np.empty_like(v)
    out[:, 0] = c * v[:, 0] + s * v[:, 1]
    out[:, 1] = -s * v[:, 0] + c * v[:, 1]
    return out


def rodrigues(v, B, s):
    """
    exp(s*skew_matrix(B)) v for each row, via the Rodrigues formula.

    Rows with |B| = 0 are returned unchanged.
    """
    norm = np.linalg.norm(B, axis=1)
    safe = np.where(norm > 0.0, norm, 1.0)
    axis = B / safe[:, None]
    angle = s * norm
    c, sn = np.cos(angle), np.sin(angle)
    along = np.sum(axis * v, axis=1)
    out = c[:, None] * v + sn[:, None] * np.cross(v, axis) + (1.0 - c)[:, None] * along[:, None] * axis
    return np.where((norm > 0.0)[:, None], out, v)


def rotate_velocity(model: MagneticModel, x, v, theta_scale, eps):
    """
    Exact flow of dv/dt = kappa_B * v x B(x) over one substep with x frozen.

    Parameters:
    - model: MagneticModel
    - x: array (2,) or (n, 2), positions (unchanged by the flow)
    - v: array (d,) or (n, d), d = 2 for scalar models, d = 3 for vector models
    - theta_scale: float, kappa_B * h
    - eps: float, perturbation scale of the model

    Return: rotated velocities, same shape as v, with |v| preserved up to rounding
    """
    v = np.asarray(v, dtype=float)
    single = v.ndim == 1
    vel = v.reshape(1, -1) if single else v
    if not (np.all(np.isfinite(vel)) and np.isfinite(theta_scale)):
        raise ValueError("Non-finite velocity or angle passed to the rotation flow")
    if vel.shape[1] != model.dim:
        raise ValueError(f"Invalid velocity dimension: {vel.shape[1]} for a {model.kind} model")
    pts = np.asarray(x, dtype=float).reshape(vel.shape[0], -1)
    if model.kind == SCALAR_2D:
        b = np.atleast_1d(eval_field(model, pts, eps))
        out = rotate_2d(vel, theta_scale * b)
    else:
        B = np.atleast_2d(eval_field(model, pts, eps))
        out = rodrigues(vel, B, theta_scale)
    return out[0] if single else out


def lorentz_term(model: MagneticModel, x, v, eps):
    """v x B(x): (b v2, -b v1) for scalar models, cross(v, B) for vector models."""
    v = np.asarray(v, dtype=float)
    if model.kind == SCALAR_2D:
        b = np.atleast_1d(eval_field(model, x, eps))
        return np.stack([b * v[:, 1], -b * v[:, 0]], axis=1)
    return np.cross(v, np.atleast_2d(eval_field(model, x, eps)))


def check_bounded(model: MagneticModel, bounds, samples=4096, limit=1e8, seed=0):
    """
    Sample the field over a box and reject unbounded or undefined perturbations.

    Parameters:
    - bounds: (x_lo, x_hi, y_lo, y_hi)
    - limit: float, largest admissible |B1|

    Return: float, the largest sampled |B1|
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    x_lo, x_hi, y_lo, y_hi = bounds
    pts = np.column_stack([rng.uniform(x_lo, x_hi, samples), rng.uniform(y_lo, y_hi, samples)])
    pert = np.asarray(model.perturbation(pts), dtype=float)
    if not np.all(np.isfinite(pert)):
        raise ValueError(f"Magnetic perturbation '{model.name}' is undefined inside the domain")
    largest = float(np.max(np.abs(pert))) if pert.size else 0.0
    if largest > limit:
        raise ValueError(f"Magnetic perturbation '{model.name}' exceeds {limit:g} on the domain: {largest:g}")
    logger.debug(f"Magnetic model {model.name}: max |B1| = {largest:.4g} over {samples} samples")
    return largest
