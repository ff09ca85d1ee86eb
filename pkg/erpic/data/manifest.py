import json
import logging
import platform
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)


def _plain(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"Not serializable: {type(value).__name__}")


def write_manifest(path, config_text, **fields):
    """
    Write manifest.json next to the run outputs.

    Parameters:
    - path: str or Path, manifest file path
    - config_text: str, rendered configuration of the run
    - fields: additional entries (seed, regime coefficients, step count, ...)
    """
    try:
        from .. import __version__
    except ImportError:
        from erpic import __version__
    manifest = {
        "package": "erpic",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "config": config_text,
    }
    manifest.update(fields)
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=_plain)
        fh.write("\n")
    logger.info(f"Manifest written: {path}")
    return path
