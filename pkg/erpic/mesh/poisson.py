"""
Spectral Poisson solve on the periodic grid and the grid-quadrature field energy
"""

import numpy as np
from scipy import fft

from ..utils.helpers import require_finite
from .grid import ScalarField, VectorField2D


def _wavenumbers(grid):
    """
    Angular wavenumbers of the (nx, ny) transform.

    Return: (kx, ky, kx_d, ky_d), broadcastable to the grid shape. The *_d versions
    are used for derivatives and carry zero at the Nyquist index.
    """
    kx = 2.0 * np.pi * fft.fftfreq(grid.nx, d=grid.dx)
    ky = 2.0 * np.pi * fft.fftfreq(grid.ny, d=grid.dy)
    kx_d, ky_d = kx.copy(), ky.copy()
    if grid.nx % 2 == 0:
        kx_d[grid.nx // 2] = 0.0
    if grid.ny % 2 == 0:
        ky_d[grid.ny // 2] = 0.0
    return kx[:, None], ky[None, :], kx_d[:, None], ky_d[None, :]


def solve_poisson(rho: ScalarField) -> VectorField2D:
    """
    Electric field E = -grad(phi) with -laplace(phi) = rho - mean(rho).

    The mean of rho plays the role of the neutralizing background, the zero mode of
    phi and of both field components is set to zero.

    Parameters:
    - rho: ScalarField, charge density on the nodes

    Return: VectorField2D
    """
    values = require_finite("charge density", rho.values)
    grid = rho.grid
    rho_hat = fft.fft2(values - np.mean(values))
    kx, ky, kx_d, ky_d = _wavenumbers(grid)
    k2 = kx ** 2 + ky ** 2
    k2[0, 0] = 1.0
    phi_hat = rho_hat / k2
    phi_hat[0, 0] = 0.0
    e1 = fft.ifft2(-1j * kx_d * phi_hat).real
    e2 = fft.ifft2(-1j * ky_d * phi_hat).real
    return VectorField2D(grid, e1, e2)


def spectral_divergence(E: VectorField2D) -> ScalarField:
    """div E computed with the same wavenumbers as solve_poisson."""
    _, _, kx_d, ky_d = _wavenumbers(E.grid)
    div_hat = 1j * kx_d * fft.fft2(E.e1) + 1j * ky_d * fft.fft2(E.e2)
    return ScalarField(E.grid, fft.ifft2(div_hat).real)


def field_energy(E: VectorField2D, lam: float = 1.0) -> float:
    """
    Field part of the discrete total energy, (lam/2) * dx*dy * sum |E|^2.

    The relaxation step solves its energy condition against this exact sum.

    Parameters:
    - E: VectorField2D
    - lam: float, field-energy weight of the scaling regime, > 0
    """
    if not lam > 0:
        raise ValueError(f"Invalid field-energy weight: {lam}. Must be > 0")
    return 0.5 * lam * E.grid.cell_area * float(np.sum(E.squared_norm()))
