"""
Initial distributions f0(x, v) and seeded rejection sampling of particle ensembles

Proposals are uniform over the spatial box times a per-distribution velocity box
and are accepted when u*M < f0, with M >= sup f0 stored on the distribution.
Every ensemble weight equals Q/n_p, Q being the closed-form (or quadrature)
value of the integral of f0, never the acceptance ratio of the sampler.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import integrate, special

try:
    # When used as a package
    from ..mesh.particles import ParticleEnsemble
    from ..utils.errors import SamplingError
except ImportError:
    # When used as standalone
    from erpic.mesh.particles import ParticleEnsemble
    from erpic.utils.errors import SamplingError

logger = logging.getLogger(__name__)

# proposals drawn per batch; part of the random stream layout, do not tune per run
BATCH = 1 << 17
MIN_ACCEPTANCE = 1e-3
MIN_PROPOSALS_FOR_RATE = 100_000
ENVELOPE_MARGIN = 1.001


def _check_box(name, box):
    lo1, hi1, lo2, hi2 = box
    if not (np.isfinite(box).all() and hi1 >= lo1 and hi2 >= lo2):
        raise ValueError(f"Invalid {name}: {box}")


@dataclass(frozen=True)
class InitialDistribution:
    """
    Base class of the initial distributions.

    Parameters:
    - bounds: (x_lo, x_hi, y_lo, y_hi), spatial box
    - velocity_box: (v1_lo, v1_hi, v2_lo, v2_hi), proposal box in velocity
    """
    bounds: Tuple[float, float, float, float]
    velocity_box: Tuple[float, float, float, float]

    name = "base"

    def __post_init__(self):
        _check_box("spatial bounds", self.bounds)
        _check_box("velocity box", self.velocity_box)

    def density(self, x, v):
        raise NotImplementedError

    @property
    def envelope(self) -> float:
        raise NotImplementedError

    def integral(self) -> float:
        raise NotImplementedError

    def kinetic_moment(self) -> float:
        """Expected |v|^2 under the normalized distribution."""
        raise NotImplementedError

    def params(self) -> dict:
        return {"distribution": self.name}


@dataclass(frozen=True)
class TwoBump(InitialDistribution):
    """
    f0 = (1 + sin x2 + eta cos(k x1))/(4 pi) * (exp(-|v + 2e1|^2/2) + exp(-|v - 2e1|^2/2))
    """
    bounds: Tuple[float, float, float, float] = (0.0, 4.0 * math.pi, 0.0, 2.0 * math.pi)
    velocity_box: Tuple[float, float, float, float] = (-8.0, 8.0, -6.0, 6.0)
    eta: float = 0.05
    k: float = 0.5

    name = "two-bump"

    def __post_init__(self):
        super().__post_init__()
        if self.eta < 0 or self.eta > 1 or self.k <= 0:
            raise ValueError(f"Invalid two-bump parameters: eta={self.eta}, k={self.k}. "
                             f"Must satisfy 0 <= eta <= 1, k > 0")

    def density(self, x, v):
        spatial = 1.0 + np.sin(x[:, 1]) + self.eta * np.cos(self.k * x[:, 0])
        v2 = v[:, 1] ** 2
        bumps = np.exp(-((v[:, 0] + 2.0) ** 2 + v2) / 2.0) + np.exp(-((v[:, 0] - 2.0) ** 2 + v2) / 2.0)
        return spatial * bumps / (4.0 * math.pi)

    @property
    def envelope(self):
        return (2.0 + self.eta) * (1.0 + math.exp(-8.0)) / (4.0 * math.pi) * ENVELOPE_MARGIN

    def integral(self):
        x_lo, x_hi, y_lo, y_hi = self.bounds
        lx, ly = x_hi - x_lo, y_hi - y_lo
        spatial = (lx * ly + lx * (math.cos(y_lo) - math.cos(y_hi))
                   + self.eta * ly * (math.sin(self.k * x_hi) - math.sin(self.k * x_lo)) / self.k)
        # each bump carries velocity mass 2 pi, the pair cancels the 1/(4 pi)
        return spatial

    def kinetic_moment(self):
        return 6.0

    def params(self):
        return {"distribution": self.name, "eta": self.eta, "k": self.k}


@dataclass(frozen=True)
class Diocotron(InitialDistribution):
    """
    f0 = d0(x)/(2 pi) exp(-|v|^2/2) with the ring density
    d0 = (1 + alpha cos(l theta)) exp(-4 (|x| - r_center)^2) for r_minus <= |x| <= r_plus.
    """
    bounds: Tuple[float, float, float, float] = (-12.0, 12.0, -12.0, 12.0)
    velocity_box: Tuple[float, float, float, float] = (-6.0, 6.0, -6.0, 6.0)
    alpha: float = 0.2
    l: int = 5
    r_minus: float = 5.0
    r_plus: float = 8.0
    r_center: float = 6.5

    name = "diocotron"

    def __post_init__(self):
        super().__post_init__()
        if not (0 <= self.alpha < 1 and 0 <= self.r_minus < self.r_plus and int(self.l) == self.l):
            raise ValueError(f"Invalid diocotron parameters: alpha={self.alpha}, l={self.l}, "
                             f"r_minus={self.r_minus}, r_plus={self.r_plus}")

    def ring_density(self, x):
        r = np.hypot(x[:, 0], x[:, 1])
        theta = np.arctan2(x[:, 1], x[:, 0])
        d0 = (1.0 + self.alpha * np.cos(self.l * theta)) * np.exp(-4.0 * (r - self.r_center) ** 2)
        return np.where((r >= self.r_minus) & (r <= self.r_plus), d0, 0.0)

    def density(self, x, v):
        return self.ring_density(x) * np.exp(-np.sum(v ** 2, axis=1) / 2.0) / (2.0 * math.pi)

    @property
    def envelope(self):
        return (1.0 + self.alpha) / (2.0 * math.pi) * ENVELOPE_MARGIN

    def integral(self):
        x_lo, x_hi, y_lo, y_hi = self.bounds
        if x_hi == x_lo or y_hi == y_lo:
            return 0.0
        if min(-x_lo, x_hi, -y_lo, y_hi) < self.r_plus:
            raise ValueError(f"Diocotron ring of radius {self.r_plus} does not fit in {self.bounds}")
        radial, _ = integrate.quad(lambda r: r * math.exp(-4.0 * (r - self.r_center) ** 2),
                                   self.r_minus, self.r_plus, epsabs=1e-13, epsrel=1e-13)
        # the cos(l theta) term integrates to zero for l >= 1
        angular = 2.0 * math.pi * (1.0 + (self.alpha if self.l == 0 else 0.0))
        return angular * radial

    def kinetic_moment(self):
        return 2.0

    def params(self):
        return {"distribution": self.name, "alpha": self.alpha, "l": int(self.l),
                "r_minus": self.r_minus, "r_plus": self.r_plus, "r_center": self.r_center}


@dataclass(frozen=True)
class TwoGaussian(InitialDistribution):
    """
    f0 = (1/(16 pi^2)) [exp(-|x - x0|^2/2) + exp(-|x + x0|^2/2)] exp(-|v|^2/4)
    """
    bounds: Tuple[float, float, float, float] = (-6.0, 6.0, -6.0, 6.0)
    velocity_box: Tuple[float, float, float, float] = (-9.0, 9.0, -9.0, 9.0)
    x0: Tuple[float, float] = (1.5, -1.5)

    name = "two-gaussian"

    def density(self, x, v):
        c = np.asarray(self.x0, dtype=float)
        spatial = np.exp(-np.sum((x - c) ** 2, axis=1) / 2.0) + np.exp(-np.sum((x + c) ** 2, axis=1) / 2.0)
        return spatial * np.exp(-np.sum(v ** 2, axis=1) / 4.0) / (16.0 * math.pi ** 2)

    @property
    def envelope(self):
        # one of |x - x0|, |x + x0| is at least |x0|, so the smaller bump is <= exp(-|x0|^2/2)
        sep2 = self.x0[0] ** 2 + self.x0[1] ** 2
        return (1.0 + math.exp(-sep2 / 2.0)) / (16.0 * math.pi ** 2) * ENVELOPE_MARGIN

    def _gauss_mass(self, lo, hi, c):
        return math.sqrt(math.pi / 2.0) * (special.erf((hi - c) / math.sqrt(2.0))
                                           - special.erf((lo - c) / math.sqrt(2.0)))

    def integral(self):
        x_lo, x_hi, y_lo, y_hi = self.bounds
        total = 0.0
        for sign in (1.0, -1.0):
            c1, c2 = sign * self.x0[0], sign * self.x0[1]
            total += self._gauss_mass(x_lo, x_hi, c1) * self._gauss_mass(y_lo, y_hi, c2)
        return total * 4.0 * math.pi / (16.0 * math.pi ** 2)

    def kinetic_moment(self):
        return 4.0

    def params(self):
        return {"distribution": self.name, "x0_1": self.x0[0], "x0_2": self.x0[1]}


DISTRIBUTIONS = {
    TwoBump.name: TwoBump,
    Diocotron.name: Diocotron,
    TwoGaussian.name: TwoGaussian,
}


def get_distribution(name, bounds=None, **params) -> InitialDistribution:
    """
    Build an initial distribution by config name.

    Parameters:
    - name: str, one of DISTRIBUTIONS
    - bounds: optional (x_lo, x_hi, y_lo, y_hi), defaults to the distribution's own box
    - params: distribution parameters (eta, k / alpha, l, r_minus, r_plus, r_center / x0)
    """
    if name not in DISTRIBUTIONS:
        raise ValueError(f"Invalid distribution: {name}. Available: {list(DISTRIBUTIONS)}")
    kwargs = {key: value for key, value in params.items() if value is not None}
    if bounds is not None:
        kwargs["bounds"] = tuple(float(b) for b in bounds)
    return DISTRIBUTIONS[name](**kwargs)


def distribution_integral(dist: InitialDistribution) -> float:
    """Integral of f0 over the spatial box and all velocities."""
    return float(dist.integral())


def sample_ensemble(dist: InitialDistribution, n_p: int, seed: int) -> ParticleEnsemble:
    """
    Draw n_p particles from f0 by rejection sampling.

    Parameters:
    - dist: InitialDistribution
    - n_p: int, number of particles, >= 1
    - seed: int, seed of the PCG64 stream

    Return: ParticleEnsemble with uniform weights Q/n_p, Q = distribution_integral(dist)
    """
    if int(n_p) != n_p or n_p < 1:
        raise ValueError(f"Invalid particle count: {n_p}. Must be a positive integer")
    n_p = int(n_p)
    rng = np.random.Generator(np.random.PCG64(seed))
    x_lo, x_hi, y_lo, y_hi = dist.bounds
    v1_lo, v1_hi, v2_lo, v2_hi = dist.velocity_box
    low = np.array([x_lo, y_lo, v1_lo, v2_lo])
    high = np.array([x_hi, y_hi, v1_hi, v2_hi])
    bound = dist.envelope

    accepted = []
    n_accepted = 0
    proposed = 0
    while n_accepted < n_p:
        z = rng.uniform(low, high, size=(BATCH, 4))
        u = rng.uniform(0.0, bound, size=BATCH)
        f = dist.density(z[:, :2], z[:, 2:])
        if np.any(f > bound):
            worst = float(np.max(f))
            raise SamplingError(f"Envelope violated for {dist.name}: f0 = {worst:.6g} > M = {bound:.6g}")
        keep = z[u < f]
        accepted.append(keep)
        n_accepted += keep.shape[0]
        proposed += BATCH
        if proposed >= MIN_PROPOSALS_FOR_RATE and n_accepted / proposed < MIN_ACCEPTANCE:
            raise SamplingError(f"Acceptance rate {n_accepted / proposed:.2e} below {MIN_ACCEPTANCE:g} "
                                f"for {dist.name}; check the envelope and velocity box")

    samples = np.concatenate(accepted)[:n_p]
    q = distribution_integral(dist)
    logger.info(f"Sampled {n_p} particles from {dist.name} (seed {seed}, acceptance {n_accepted / proposed:.3%}, "
                f"mass {q:.6g})")
    return ParticleEnsemble.uniform(samples[:, :2], samples[:, 2:], q)
