"""
Scaling index ι of a path:

    I(λ; α) = ∫_0^T dr ∫_0^{T-r} dt e^{-λt} |w^r_t|^α  ≲  λ^{-1-ια},   α ∈ (-1, 0)

The double integral is split into lag cells [t_{j-1}, t_j]. For each cell the
λ-independent part C_j = ∫ dr ∫_cell |w^r_t|^α dt is accumulated once per α, with w
piecewise linear between grid points, and I(λ) = Σ_j E_j(λ) C_j where E_j is the cell
average of e^{-λt} (weighted by t^α on the first cell, where the integrand is singular).
"""
import math
from typing import Sequence, Tuple

import numpy as np
from numba import njit
from scipy.special import gamma as gamma_fn
from scipy.special import gammainc

from rough_paths import SampledPath
from utils.fitting import loglog_fit

from .models import IotaEstimate

ZERO_FRACTION_LIMIT = 1e-3
MAX_ORIGINS = 2048
IOTA_RANGE = (0.0, 1.5)


@njit(cache=True)
def _pl_power_mean(x0, x1, alpha):
    """Mean of |x|^α over the segment from x0 to x1 (scalar, not both zero)"""
    a0 = abs(x0)
    a1 = abs(x1)
    p = 1.0 + alpha
    if x0 * x1 > 0.0:
        span = a1 - a0
        if abs(span) <= 1e-9 * max(a0, a1):
            return (0.5 * (a0 + a1)) ** alpha
        return (a1**p - a0**p) / (p * span)
    return (a0**p + a1**p) / (p * abs(x1 - x0))


@njit(cache=True)
def _lag_cell_integrals(values, alpha, stride, dt):
    """
    Returns (C, n_zero, n_cells): C[j] = Σ_origins stride·dt·∫_{cell j} |w^r_t|^α dt
    """
    n = values.shape[0] - 1
    dim = values.shape[1]
    cells = np.zeros(n + 1)
    n_zero = 0
    n_cells = 0
    weight = stride * dt
    for i in range(0, n, stride):
        prev = 0.0
        prev_signed = 0.0
        for j in range(1, n - i + 1):
            n_cells += 1
            if dim == 1:
                x1 = values[i + j, 0] - values[i, 0]
                ax1 = abs(x1)
            else:
                acc = 0.0
                for c in range(dim):
                    diff = values[i + j, c] - values[i, c]
                    acc += diff * diff
                x1 = math.sqrt(acc)
                ax1 = x1
            if j == 1:
                if ax1 == 0.0:
                    n_zero += 1
                else:
                    # exact for a linear segment starting at the origin
                    cells[1] += weight * dt * ax1**alpha / (1.0 + alpha)
            elif dim == 1:
                if prev_signed == 0.0 and x1 == 0.0:
                    n_zero += 1
                else:
                    cells[j] += weight * dt * _pl_power_mean(prev_signed, x1, alpha)
            else:
                if prev == 0.0 or ax1 == 0.0:
                    n_zero += 1
                else:
                    cells[j] += weight * dt * 0.5 * (prev**alpha + ax1**alpha)
            prev = ax1
            prev_signed = x1
    return cells, n_zero, n_cells


def _cell_weights(lam: float, alpha: float, n: int, dt: float) -> np.ndarray:
    """E_j(λ): average of e^{-λt} over lag cell j (t^α-weighted on the first cell)"""
    weights = np.zeros(n + 1)
    c = lam * dt
    weights[1] = (1.0 + alpha) * c ** (-1.0 - alpha) * gamma_fn(1.0 + alpha) * gammainc(1.0 + alpha, c)
    j = np.arange(2, n + 1)
    weights[2:] = np.exp(-lam * (j - 1) * dt) * (-np.expm1(-c)) / c
    return weights


def scaling_integrals(
    p: SampledPath, alpha: float, lambdas: Sequence[float]
) -> Tuple[np.ndarray, float]:
    """I(λ; α) on the given λ values and the share of skipped zero cells"""
    if not -1.0 < alpha < 0.0:
        raise ValueError(f"alpha must lie in (-1, 0), got {alpha}")
    stride = max(1, p.n_steps // MAX_ORIGINS)
    values = np.ascontiguousarray(p.values, dtype=np.float64)
    cells, n_zero, n_cells = _lag_cell_integrals(values, alpha, stride, p.dt)
    integrals = np.array([
        float(_cell_weights(lam, alpha, p.n_steps, p.dt) @ cells) for lam in lambdas
    ])
    return integrals, n_zero / max(n_cells, 1)


def estimate_iota(
    p: SampledPath,
    alphas: Sequence[float] = (-0.3, -0.5, -0.7),
    lambda_min: float = 4.0,
    lambda_max: float = 4096.0,
    n_lambda: int = 16,
) -> IotaEstimate:
    """
    Estimate ι from the λ-decay of I(λ; α)

    For every α the slope σ(α) of log I against log λ gives ι(α) = (-1 - σ(α))/α;
    ι̂ is the median of ι(α) over α, clipped to [0, 1.5].

    Args:
        p: the sampled path
        alphas: exponents in (-0.9, -0.1)
        lambda_min: smallest λ (at least 1)
        lambda_max: largest λ (at least 16·lambda_min)
        n_lambda: number of geometric λ points

    Returns:
        IotaEstimate, flagged when more than a 1e-3 share of lag cells had |w^r_t| = 0
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ValueError("need at least one alpha")
    for alpha in alphas:
        if not -0.9 < alpha < -0.1:
            raise ValueError(f"alpha must lie in (-0.9, -0.1), got {alpha}")
    if lambda_min < 1.0:
        raise ValueError(f"lambda_min must be at least 1, got {lambda_min}")
    if lambda_max / lambda_min < 16.0:
        raise ValueError(
            f"lambda range too short: lambda_max/lambda_min = {lambda_max / lambda_min:g} < 16"
        )
    if n_lambda < 4:
        raise ValueError(f"n_lambda must be at least 4, got {n_lambda}")

    lambdas = np.geomspace(lambda_min, lambda_max, n_lambda)
    rows = []
    curves = []
    zero_fraction = 0.0
    for alpha in alphas:
        integrals, zf = scaling_integrals(p, alpha, lambdas)
        zero_fraction = max(zero_fraction, zf)
        if np.any(integrals <= 0.0):
            raise ValueError(
                f"scaling integral vanishes for alpha={alpha}: the path has no nonzero increments"
            )
        fit = loglog_fit(lambdas, integrals)
        rows.append((alpha, fit.slope, fit.r_squared))
        curves.append(integrals)

    per_alpha_iota = np.array([(-1.0 - slope) / alpha for alpha, slope, _ in rows])
    iota_hat = float(np.clip(np.median(per_alpha_iota), *IOTA_RANGE))
    curves = np.array(curves)
    exponents = 1.0 + iota_hat * np.array(alphas)
    constant = float(np.max(curves * lambdas[None, :] ** exponents[:, None]))

    return IotaEstimate(
        iota_hat=iota_hat,
        per_alpha=rows,
        lambda_grid=lambdas,
        constant_C=constant,
        integrals=curves,
        zero_fraction=zero_fraction,
        flagged=zero_fraction > ZERO_FRACTION_LIMIT,
    )
