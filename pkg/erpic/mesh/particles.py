from dataclasses import dataclass

import numpy as np


@dataclass
class ParticleEnsemble:
    """
    Macroparticles of the discrete distribution f_p

    Parameters:
    - positions: array (n_p, 2), canonical periodic representatives
    - velocities: array (n_p, d), d = 2 for PIC runs, 3 allowed for single-particle tests
    - weights: array (n_p,), all equal and strictly positive
    - mass: float, the integral estimate of f0 recorded at creation (sum of weights)
    """
    positions: np.ndarray
    velocities: np.ndarray
    weights: np.ndarray
    mass: float = None

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        n_p = self.positions.shape[0]
        self.velocities = np.asarray(self.velocities, dtype=float).reshape(n_p, -1) if n_p else \
            np.asarray(self.velocities, dtype=float).reshape(0, 2)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.velocities.shape[0] != n_p or self.weights.shape[0] != n_p:
            raise ValueError(f"Inconsistent ensemble sizes: positions {n_p}, "
                             f"velocities {self.velocities.shape[0]}, weights {self.weights.shape[0]}")
        if self.velocities.shape[1] not in (2, 3):
            raise ValueError(f"Invalid velocity dimension: {self.velocities.shape[1]}. Available: [2, 3]")
        if n_p and (np.any(self.weights <= 0) or np.ptp(self.weights) != 0):
            raise ValueError("Ensemble weights must be uniform and strictly positive")
        if self.mass is None:
            self.mass = float(np.sum(self.weights))

    @classmethod
    def uniform(cls, positions, velocities, mass):
        """Build an ensemble whose n_p weights all equal mass/n_p."""
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        n_p = positions.shape[0]
        weights = np.full(n_p, mass / n_p) if n_p else np.zeros(0)
        return cls(positions, velocities, weights, float(mass))

    @property
    def n_p(self):
        return self.positions.shape[0]

    @property
    def dim(self):
        return self.velocities.shape[1]

    def copy(self):
        return ParticleEnsemble(self.positions.copy(), self.velocities.copy(),
                                self.weights.copy(), self.mass)

    def with_state(self, positions, velocities):
        """Same particles and weights, new phase-space coordinates."""
        return ParticleEnsemble(positions, velocities, self.weights, self.mass)

    def kinetic_energy(self):
        """(1/2) sum_k w_k |v_k|^2"""
        return 0.5 * float(np.sum(self.weights * np.sum(self.velocities ** 2, axis=1)))
