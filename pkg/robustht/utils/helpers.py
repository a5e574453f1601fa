"""
Helper functions for robustht
"""

import math
from typing import Sequence, Tuple

import numpy as np

from robustht.config import CI_Z

__all__ = (
    "log_grid",
    "fit_loglog_slope",
    "ci_radius"
)

def log_grid(start: float, stop: float, points: int) -> np.ndarray:
    """Log-spaced grid from start to stop inclusive"""
    if start <= 0 or stop <= start or points < 2:
        raise ValueError("log grid needs 0 < start < stop and at least two points")
    return np.geomspace(start, stop, points)

def fit_loglog_slope(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float, float]:
    """Least-squares fit of log y = a + b log x.

    Returns
    -------
        :obj:`tuple`
            ``(slope, intercept, r_squared)``
    """
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    if lx.size < 2:
        raise ValueError("need at least two points for a slope")
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = intercept + slope * lx
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r_squared

def ci_radius(rate: float, trials: int) -> float:
    """Normal-approximation 95% radius for an error frequency"""
    if trials <= 0:
        return math.inf
    return CI_Z * math.sqrt(rate * (1.0 - rate) / trials)
