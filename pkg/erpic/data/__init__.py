"""Snapshot, ensemble and manifest files"""

from .snapshots import write_snapshot, read_snapshot, write_grid_values, read_grid_values
from .ensemble_io import MAGIC, dump_ensemble, load_ensemble
from .manifest import write_manifest

__all__ = [
    'write_snapshot',
    'read_snapshot',
    'write_grid_values',
    'read_grid_values',
    'MAGIC',
    'dump_ensemble',
    'load_ensemble',
    'write_manifest',
]
