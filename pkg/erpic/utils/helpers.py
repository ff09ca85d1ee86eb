import logging
import math
import os

import numpy as np
import pandas as pd


def step_count(horizon, dt):
    """
    Number of fixed steps of size dt that fit into horizon.

    Parameters:
    - horizon: float, run length in the integration time variable
    - dt: float, step size

    Return: int, floor(horizon/dt) with a 1e-9 relative slack so that 20/0.1 gives 200
    """
    if dt <= 0:
        raise ValueError(f"Invalid step size: {dt}. Must be > 0")
    return int(math.floor(horizon / dt + 1e-9))


def setup_logging(level=None):
    """
    Configure root logging for command line use.

    Parameters:
    - level: str or None, logging level name; falls back to ERPIC_LOG_LEVEL, then INFO
    """
    level = (level or os.environ.get("ERPIC_LOG_LEVEL") or "INFO").upper()
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s",
                        force=True)
    return logging.getLogger("erpic")


def worker_count():
    """Maximum number of worker processes, from ERPIC_THREADS (default 1)."""
    raw = os.environ.get("ERPIC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"Invalid ERPIC_THREADS: {raw!r}. Must be a positive integer")


def write_csv(df: pd.DataFrame, path):
    """Write a table with full float precision so reruns are byte identical."""
    df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path


def require_finite(name, values):
    """Reject arrays containing NaN or inf."""
    arr = np.asarray(values)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"Non-finite values in {name}")
    return arr
