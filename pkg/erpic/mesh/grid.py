"""
Periodic rectangular mesh and node-sampled fields

Fields live at the nodes x_i = x_lo + i*dx, y_j = y_lo + j*dy with
i = 0..nx-1, j = 0..ny-1. Values are stored as (nx, ny) arrays, so
values[i, j] is the sample at (x_i, y_j). The mesh is periodic in both axes.
"""

from dataclasses import dataclass, field

import numpy as np

# quintic stencil covers 6 nodes, each axis must be wider than that
MIN_CELLS = 8


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValueError(f"Invalid cell counts: nx={self.nx}, ny={self.ny}. Must be integers")
        if self.nx < MIN_CELLS or self.ny < MIN_CELLS:
            raise ValueError(f"Invalid cell counts: nx={self.nx}, ny={self.ny}. "
                             f"Both must be >= {MIN_CELLS}")
        if not (np.isfinite([self.x_lo, self.x_hi, self.y_lo, self.y_hi]).all()
                and self.x_hi > self.x_lo and self.y_hi > self.y_lo):
            raise ValueError(f"Invalid domain bounds: [{self.x_lo}, {self.x_hi}] x [{self.y_lo}, {self.y_hi}]")

    @property
    def dx(self):
        return (self.x_hi - self.x_lo) / self.nx

    @property
    def dy(self):
        return (self.y_hi - self.y_lo) / self.ny

    @property
    def lx(self):
        return self.x_hi - self.x_lo

    @property
    def ly(self):
        return self.y_hi - self.y_lo

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def cell_area(self):
        return self.dx * self.dy

    def nodes(self):
        """Return the node coordinates as two (nx, ny) arrays (X, Y)."""
        x = self.x_lo + np.arange(self.nx) * self.dx
        y = self.y_lo + np.arange(self.ny) * self.dy
        return np.meshgrid(x, y, indexing="ij")

    def wrap(self, positions):
        """
        Map positions to their canonical periodic representative.

        Parameters:
        - positions: array of shape (n, 2) or (2,)

        Return: array of the same shape inside [x_lo, x_hi) x [y_lo, y_hi)
        """
        p = np.array(positions, dtype=float, copy=True)
        p[..., 0] = self.x_lo + np.mod(p[..., 0] - self.x_lo, self.lx)
        p[..., 1] = self.y_lo + np.mod(p[..., 1] - self.y_lo, self.ly)
        # np.mod can round up to exactly the period for tiny negative inputs
        p[..., 0] = np.where(p[..., 0] >= self.x_hi, self.x_lo, p[..., 0])
        p[..., 1] = np.where(p[..., 1] >= self.y_hi, self.y_lo, p[..., 1])
        return p

    def zeros(self):
        return ScalarField(self, np.zeros(self.shape))


@dataclass
class ScalarField:
    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"Field shape {self.values.shape} does not match grid {self.grid.shape}")

    def integral(self):
        """Rectangle-rule integral dx*dy*sum(values)."""
        return self.grid.cell_area * float(np.sum(self.values))

    def mean(self):
        return float(np.mean(self.values))

    def max_norm(self):
        return float(np.max(np.abs(self.values)))

    def __sub__(self, other):
        return ScalarField(self.grid, self.values - other.values)


@dataclass
class VectorField2D:
    grid: Grid2D
    e1: np.ndarray
    e2: np.ndarray = field(default=None)

    def __post_init__(self):
        self.e1 = np.asarray(self.e1, dtype=float)
        self.e2 = np.zeros(self.grid.shape) if self.e2 is None else np.asarray(self.e2, dtype=float)
        if self.e1.shape != self.grid.shape or self.e2.shape != self.grid.shape:
            raise ValueError(f"Component shapes {self.e1.shape}, {self.e2.shape} "
                             f"do not match grid {self.grid.shape}")

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape), np.zeros(grid.shape))

    def components(self):
        return (ScalarField(self.grid, self.e1), ScalarField(self.grid, self.e2))

    def squared_norm(self):
        return self.e1 ** 2 + self.e2 ** 2
