"""
Fractional regularity estimators: fitted Besov exponent and Gagliardo seminorm
"""
from typing import Optional, Sequence

import numpy as np
from numba import njit

from utils.fitting import loglog_fit

from .models import ModulusCurve, RegularityReport
from .modulus import _check_field

FIT_HI_DEFAULT = 1.0 / 16.0
FIT_LO_CELLS = 4
MIN_FIT_LAGS = 4
LAMBDA_RANGE = (0.05, 0.95)


def besov_exponent(
    curve: ModulusCurve, fit_lo: Optional[float] = None, fit_hi: Optional[float] = None
) -> RegularityReport:
    """
    λ̂ = slope of log ω against log h over [fit_lo, fit_hi], clamped to [0, 1]

    The default range [4Δx, 1/16] leaves out the grid-scale plateau and the O(1)
    saturation of the modulus.
    """
    dx = 1.0 / curve.nx
    lo = FIT_LO_CELLS * dx if fit_lo is None else fit_lo
    hi = FIT_HI_DEFAULT if fit_hi is None else fit_hi
    tol = 1e-12
    inside = np.flatnonzero((curve.lags >= lo * (1 - tol)) & (curve.lags <= hi * (1 + tol)))
    if inside.size == 0:
        raise ValueError(f"fit range [{lo}, {hi}] contains no lag")
    if inside.size < MIN_FIT_LAGS:
        raise ValueError(
            f"fit range [{lo}, {hi}] contains {inside.size} lags, need at least {MIN_FIT_LAGS}"
        )
    fit_range = (int(inside[0]), int(inside[-1]) + 1)
    omega = curve.omega[inside]
    if np.all(omega == 0.0):
        return RegularityReport(
            lambda_hat=1.0, curve=curve, fit_range=fit_range, fit_quality=1.0,
            time_averaged=curve.time_averaged, smooth=True,
        )
    positive = omega > 0.0
    if positive.sum() < 2:
        raise ValueError("modulus vanishes on all but one lag of the fit range")
    fit = loglog_fit(curve.lags[inside][positive], omega[positive])
    return RegularityReport(
        lambda_hat=float(np.clip(fit.slope, 0.0, 1.0)),
        curve=curve,
        fit_range=fit_range,
        fit_quality=fit.r_squared,
        time_averaged=curve.time_averaged,
    )


def _lag_segment_integral(h0: float, h1: float, w0: float, w1: float, lam: float) -> float:
    """∫_{h0}^{h1} ω(h) h^{-1-λ} dh for ω linear between (h0, w0) and (h1, w1), h0 > 0"""
    beta = (w1 - w0) / (h1 - h0)
    alpha = w0 - beta * h0
    return (
        alpha * (h0 ** (-lam) - h1 ** (-lam)) / lam
        + beta * (h1 ** (1.0 - lam) - h0 ** (1.0 - lam)) / (1.0 - lam)
    )


def _piecewise_linear_seminorm(lags: np.ndarray, omega: np.ndarray, lam: float) -> float:
    """2 ∫_0^{h_last} ω(h) h^{-1-λ} dh with ω linear from (0, 0) and between the lags"""
    total = omega[0] * lags[0] ** (-lam) / (1.0 - lam)
    for k in range(lags.size - 1):
        total += _lag_segment_integral(lags[k], lags[k + 1], omega[k], omega[k + 1], lam)
    return 2.0 * total


@njit(cache=True)
def _all_shift_moduli(u):
    n = u.size
    half = n // 2
    out = np.zeros(half + 1)
    for s in range(1, half + 1):
        acc = 0.0
        for j in range(n):
            acc += abs(u[(j + s) % n] - u[j])
        out[s] = acc / n
    return out


def _check_lambda(lam: float) -> None:
    if not LAMBDA_RANGE[0] < lam < LAMBDA_RANGE[1]:
        raise ValueError(f"lambda must lie in {LAMBDA_RANGE}, got {lam}")


def gagliardo_seminorm(field, lam: float) -> float:
    """
    [u]_{W^{λ,1}} = ∫_T ∫_{|h|<=1/2} |u(x+h) - u(x)| / |h|^{1+λ} dh dx

    For cell averages the shifted L¹ distance is linear in h between integer cell
    shifts, so the lag integral is evaluated in closed form on every segment.
    """
    _check_lambda(lam)
    u = np.ascontiguousarray(_check_field(field))
    nx = u.size
    moduli = _all_shift_moduli(u)
    lags = np.arange(1, moduli.size) / nx
    omega = moduli[1:]
    if nx % 2:
        # odd nx: the last segment stops at 1/2 inside the cell
        lags = np.append(lags, 0.5)
        omega = np.append(omega, omega[-1])
    return float(_piecewise_linear_seminorm(lags, omega, lam))


def seminorm_from_modulus(curve: ModulusCurve, lam: float) -> float:
    """The same seminorm from a dyadic modulus curve, ω linear between the curve's lags"""
    _check_lambda(lam)
    lags, omega = curve.lags, curve.omega
    if lags[-1] < 0.5:
        lags = np.append(lags, 0.5)
        omega = np.append(omega, omega[-1])
    return float(_piecewise_linear_seminorm(lags, omega, lam))


def with_gagliardo(report: RegularityReport, field, lambdas: Sequence[float]) -> RegularityReport:
    """Attach (λ, seminorm) pairs to a report"""
    pairs = [(float(lam), gagliardo_seminorm(field, lam)) for lam in lambdas]
    return report.model_copy(update={"gagliardo": pairs})
