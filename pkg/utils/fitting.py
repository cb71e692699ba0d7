"""
Log-log slope fitting shared by the exponent estimators
(Hölder exponent, ρ̂, ι̂, Besov λ̂).
"""
from typing import NamedTuple

import numpy as np
from scipy.stats import linregress


class LogLogFit(NamedTuple):
    slope: float
    intercept: float
    r_squared: float


def loglog_fit(x, y) -> LogLogFit:
    """
    Least-squares fit of log(y) against log(x)

    Args:
        x: positive abscissae (at least two distinct values)
        y: positive ordinates

    Returns:
        LogLogFit with the slope, intercept and coefficient of determination
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("loglog_fit needs two equally sized arrays with at least 2 points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("loglog_fit needs strictly positive values")
    res = linregress(np.log(x), np.log(y))
    r2 = float(res.rvalue ** 2) if np.isfinite(res.rvalue) else 0.0
    return LogLogFit(float(res.slope), float(res.intercept), r2)
