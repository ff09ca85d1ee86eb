"""
Text snapshots of node-sampled fields

Format: one header line `# nx ny x_lo x_hi y_lo y_hi t` followed by a single line
of nx*ny comma-separated values, i (the first axis) running fastest.
"""

import logging
from pathlib import Path

import numpy as np

try:
    # When used as a package
    from ..mesh import Grid2D, ScalarField
except ImportError:
    # When used as standalone
    from erpic.mesh import Grid2D, ScalarField

logger = logging.getLogger(__name__)


def _fmt(value):
    return "%.17g" % value


def write_grid_values(values, bounds, t, path):
    """
    Write an (nx, ny) array with its bounds in the snapshot format.

    Parameters:
    - values: array (nx, ny)
    - bounds: (x_lo, x_hi, y_lo, y_hi)
    - t: float, time stamp
    - path: str or Path
    """
    values = np.asarray(values, dtype=float)
    nx, ny = values.shape
    header = " ".join([str(nx), str(ny)] + [_fmt(b) for b in bounds] + [_fmt(t)])
    body = ",".join(_fmt(v) for v in values.ravel(order="F"))
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# {header}\n{body}\n")
    logger.debug(f"Snapshot written: {path}")
    return path


def write_snapshot(field: ScalarField, t, path):
    """Write a ScalarField at time t."""
    g = field.grid
    return write_grid_values(field.values, (g.x_lo, g.x_hi, g.y_lo, g.y_hi), t, path)


def read_grid_values(path):
    """
    Read a snapshot file.

    Return: (values (nx, ny) array, bounds tuple, t)
    """
    with open(path) as fh:
        header = fh.readline()
        body = fh.read().strip()
    if not header.startswith("#"):
        raise ValueError(f"Invalid snapshot header in {path}: {header!r}")
    parts = header[1:].split()
    if len(parts) != 7:
        raise ValueError(f"Invalid snapshot header in {path}: expected 7 fields, got {len(parts)}")
    nx, ny = int(parts[0]), int(parts[1])
    bounds = tuple(float(p) for p in parts[2:6])
    t = float(parts[6])
    values = np.array([float(v) for v in body.split(",")]) if body else np.zeros(0)
    if values.size != nx * ny:
        raise ValueError(f"Snapshot {path} holds {values.size} values, header announces {nx * ny}")
    return values.reshape((nx, ny), order="F"), bounds, t


def read_snapshot(path):
    """
    Read a snapshot of a periodic-grid field.

    Return: (ScalarField, t)
    """
    values, bounds, t = read_grid_values(path)
    grid = Grid2D(values.shape[0], values.shape[1], *bounds)
    return ScalarField(grid, values), t
