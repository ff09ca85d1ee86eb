"""
Binary particle ensemble dumps

Layout: 8-byte magic b"ERPICENS", little-endian uint64 particle count n, then
positions (n*2), velocities (n*d) and weights (n) as little-endian float64,
row-major. The velocity dimension d is inferred from the file length.
"""

import logging
import struct
from pathlib import Path

import numpy as np

try:
    # When used as a package
    from ..mesh import ParticleEnsemble
except ImportError:
    # When used as standalone
    from erpic.mesh import ParticleEnsemble

logger = logging.getLogger(__name__)

MAGIC = b"ERPICENS"
_F8 = np.dtype("<f8")


def dump_ensemble(ensemble: ParticleEnsemble, path):
    """Write the ensemble to path in the binary dump format."""
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", ensemble.n_p))
        for block in (ensemble.positions, ensemble.velocities, ensemble.weights):
            fh.write(np.ascontiguousarray(block, dtype=_F8).tobytes())
    logger.info(f"Ensemble of {ensemble.n_p} particles dumped to {path}")
    return path


def load_ensemble(path) -> ParticleEnsemble:
    """Read an ensemble written by dump_ensemble."""
    raw = Path(path).read_bytes()
    if raw[:8] != MAGIC:
        raise ValueError(f"Invalid ensemble file {path}: bad magic {raw[:8]!r}")
    (n,) = struct.unpack("<Q", raw[8:16])
    payload = np.frombuffer(raw[16:], dtype=_F8)
    if n == 0:
        return ParticleEnsemble(np.zeros((0, 2)), np.zeros((0, 2)), np.zeros(0), 0.0)
    per_particle, rest = divmod(payload.size, n)
    dim = per_particle - 3
    if rest or dim not in (2, 3):
        raise ValueError(f"Invalid ensemble file {path}: {payload.size} values for {n} particles")
    positions = payload[:2 * n].reshape(n, 2)
    velocities = payload[2 * n:(2 + dim) * n].reshape(n, dim)
    weights = payload[(2 + dim) * n:]
    return ParticleEnsemble(positions.copy(), velocities.copy(), weights.copy())
