"""
Hölder regularity of sampled paths
"""
import numpy as np

from utils.fitting import loglog_fit

from .sampled_path import HoelderEstimate, SampledPath


def _sup_increment(values: np.ndarray, lag: int) -> float:
    diff = values[lag:] - values[:-lag]
    return float(np.max(np.linalg.norm(diff, axis=1)))


def holder_exponent(p: SampledPath, h_dyadic_levels: int = 8) -> HoelderEstimate:
    """
    Estimate the Hölder exponent η of a path from its sup-increment modulus

    M(h) = sup_k |w_{t_k+h} - w_{t_k}| is evaluated at the dyadic lags h = 2^j Δt,
    j = 0..h_dyadic_levels-1, and η̂ is the log-log slope of M against h clamped to [0, 1].

    Args:
        p: the sampled path
        h_dyadic_levels: number of dyadic lags (at least 3, with 2^levels <= N)

    Returns:
        HoelderEstimate; a constant path gives η̂ = 1 with the degenerate flag set
    """
    if h_dyadic_levels < 3:
        raise ValueError(f"h_dyadic_levels must be at least 3, got {h_dyadic_levels}")
    if 2**h_dyadic_levels > p.n_steps:
        raise ValueError(
            f"2^h_dyadic_levels = {2**h_dyadic_levels} exceeds the number of steps N={p.n_steps}"
        )

    lags = 2 ** np.arange(h_dyadic_levels)
    h = lags * p.dt
    sup_inc = np.array([_sup_increment(p.values, int(lag)) for lag in lags])
    modulus = np.column_stack([h, sup_inc])

    if np.all(sup_inc == 0.0):
        return HoelderEstimate(eta_hat=1.0, modulus=modulus, fit_quality=1.0, degenerate=True)
    if np.any(sup_inc == 0.0):
        # a path that is constant on a prefix of lags still has a usable upper part
        keep = sup_inc > 0.0
        fit = loglog_fit(h[keep], sup_inc[keep]) if keep.sum() >= 2 else None
        if fit is None:
            return HoelderEstimate(eta_hat=1.0, modulus=modulus, fit_quality=0.0, degenerate=True)
    else:
        fit = loglog_fit(h, sup_inc)

    eta_hat = float(np.clip(fit.slope, 0.0, 1.0))
    return HoelderEstimate(eta_hat=eta_hat, modulus=modulus, fit_quality=fit.r_squared)


def holder_seminorm(p: SampledPath, eta: float) -> float:
    """‖w‖_η = max over grid pairs s < t of |w_t - w_s| / |t - s|^η"""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    best = 0.0
    for lag in range(1, p.n_steps + 1):
        sup_inc = _sup_increment(p.values, lag)
        best = max(best, sup_inc / (lag * p.dt) ** eta)
    return best
