"""
Quintic B-spline particle <-> grid transfers

The shape function is the centered cardinal B-spline of degree 5 (support of
6 cells). A particle at u = (x - x_lo)/dx cell units, with i0 = floor(u) and
s = u - i0, touches the nodes i0-2 .. i0+3 with the weights returned by
bspline_weights(s). Deposition and interpolation use the same weights, so they
are adjoint to each other up to rounding.
"""

import numpy as np

from ..utils.helpers import require_finite
from .grid import Grid2D, ScalarField, VectorField2D
from .particles import ParticleEnsemble

STENCIL_OFFSETS = np.arange(-2, 4)

# particles are processed in fixed blocks; the block size is part of the
# summation order, keep it constant for reproducible deposits
CHUNK = 32768


def bspline_weights(s):
    """
    Quintic B-spline weights of the 6 nodes covering a particle.

    Parameters:
    - s: float or array, fractional offset from the left node in cell units, 0 <= s < 1

    Return: array of shape s.shape + (6,) for nodes i0-2 .. i0+3
    """
    s = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(s)) or np.any(s < 0.0) or np.any(s >= 1.0):
        raise ValueError(f"Invalid offset: {s}. Must satisfy 0 <= s < 1")
    return _weights(s)


def _weights(s):
    t = 1.0 - s
    s2, t2 = s * s, t * t
    w = np.empty(s.shape + (6,))
    w[..., 0] = t2 * t2 * t / 120.0
    w[..., 1] = (1.0 + t * (5.0 + t * (10.0 + t * (10.0 + t * (5.0 - 5.0 * t))))) / 120.0
    w[..., 2] = (66.0 + s2 * (-60.0 + s2 * (30.0 - 10.0 * s))) / 120.0
    w[..., 3] = (66.0 + t2 * (-60.0 + t2 * (30.0 - 10.0 * t))) / 120.0
    w[..., 4] = (1.0 + s * (5.0 + s * (10.0 + s * (10.0 + s * (5.0 - 5.0 * s))))) / 120.0
    w[..., 5] = s2 * s2 * s / 120.0
    return w


def axis_stencil(coord, lo, step, n, periodic=True):
    """
    Node indices and weights along one axis.

    Parameters:
    - coord: array (m,), coordinates
    - lo: float, coordinate of node 0
    - step: float, node spacing
    - n: int, number of nodes
    - periodic: bool, wrap indices modulo n; otherwise indices may fall outside [0, n)

    Return: (indices (m, 6) int array, weights (m, 6) float array)
    """
    u = (np.asarray(coord, dtype=float) - lo) / step
    i0 = np.floor(u)
    s = u - i0
    # u just below an integer can round s up to 1.0
    edge = s >= 1.0
    if np.any(edge):
        s = np.where(edge, 0.0, s)
        i0 = np.where(edge, i0 + 1.0, i0)
    idx = i0.astype(np.int64)[:, None] + STENCIL_OFFSETS[None, :]
    if periodic:
        idx = np.mod(idx, n)
    return idx, _weights(s)


def deposit_weights(positions, weights, grid: Grid2D):
    """
    Deposit arbitrary per-particle weights on the periodic grid.

    Return: (nx, ny) array rho_ij = sum_k w_k S(x_i - x_k)/dx S(y_j - y_k)/dy
    """
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    weights = np.asarray(weights, dtype=float).reshape(-1)
    size = grid.nx * grid.ny
    acc = np.zeros(size)
    for start in range(0, positions.shape[0], CHUNK):
        block = slice(start, start + CHUNK)
        ix, wx = axis_stencil(positions[block, 0], grid.x_lo, grid.dx, grid.nx)
        iy, wy = axis_stencil(positions[block, 1], grid.y_lo, grid.dy, grid.ny)
        flat = (ix[:, :, None] * grid.ny + iy[:, None, :]).ravel()
        contrib = (weights[block, None, None] * wx[:, :, None] * wy[:, None, :]).ravel()
        acc += np.bincount(flat, weights=contrib, minlength=size)
    return acc.reshape(grid.shape) / grid.cell_area


def deposit_density(ensemble: ParticleEnsemble, grid: Grid2D) -> ScalarField:
    """
    Charge density of the ensemble on the grid.

    Parameters:
    - ensemble: ParticleEnsemble with 2D velocities, positions canonicalized
    - grid: Grid2D

    Return: ScalarField with dx*dy*sum(rho) equal to sum of weights up to rounding
    """
    if ensemble.dim != 2:
        raise ValueError(f"Invalid ensemble dimension for deposition: {ensemble.dim}. Must be 2")
    return ScalarField(grid, deposit_weights(ensemble.positions, ensemble.weights, grid))


def _gather(values_list, positions, grid):
    positions = require_finite("interpolation positions", np.asarray(positions, dtype=float))
    single = positions.ndim == 1
    pts = grid.wrap(positions.reshape(-1, 2))
    out = np.empty((pts.shape[0], len(values_list)))
    for start in range(0, pts.shape[0], CHUNK):
        block = slice(start, start + CHUNK)
        ix, wx = axis_stencil(pts[block, 0], grid.x_lo, grid.dx, grid.nx)
        iy, wy = axis_stencil(pts[block, 1], grid.y_lo, grid.dy, grid.ny)
        for c, values in enumerate(values_list):
            local = values[ix[:, :, None], iy[:, None, :]]
            out[block, c] = np.einsum("na,nb,nab->n", wx, wy, local)
    return out[0] if single else out


def interpolate_field(E: VectorField2D, position):
    """
    Electric field at particle positions.

    Parameters:
    - E: VectorField2D
    - position: array (2,) or (n, 2), wrapped into the periodic box internally

    Return: array (2,) or (n, 2)
    """
    return _gather([E.e1, E.e2], position, E.grid)


def interpolate_scalar(field: ScalarField, positions):
    """Scalar field values at positions, same kernel as interpolate_field."""
    out = _gather([field.values], positions, field.grid)
    return out[..., 0]
