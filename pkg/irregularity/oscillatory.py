"""
Oscillatory integrals of a sampled path

    Φ_{s,t}(a) = ∫_s^t e^{i<a, w_r>} dr
    Ψ_{s,t}(a, b) = ∫_s^t e^{i<a, w_r> - 2br} dr
    K(a, b) = sup_s |Ψ^{w^s}_{0,T-s}(a, b)|

All integrals use the trapezoidal rule on the path's native grid with s, t snapped to
grid points. The quadrature error is of order Δt·|a|·(variation of w over a step), so
frequencies should stay well below 1/max|Δw|.
"""
import cmath
from typing import Iterable, List, Optional, Sequence

import numpy as np
from numba import njit
from scipy.integrate import cumulative_trapezoid, trapezoid

from rough_paths import SampledPath

from .models import OscillatoryScan


def as_frequency(p: SampledPath, a) -> np.ndarray:
    """Coerce a frequency to a vector in R^d"""
    vec = np.atleast_1d(np.asarray(a, dtype=float))
    if vec.shape != (p.dim,):
        raise ValueError(f"frequency must be a vector of length d={p.dim}, got shape {vec.shape}")
    return vec


def snap_window(p: SampledPath, s: float, t: float):
    """Grid indices (i, j), i < j, of the window [s, t]"""
    if s >= t:
        raise ValueError(f"window needs s < t, got s={s}, t={t}")
    i, j = p.index_of(s), p.index_of(t)
    if i >= j:
        raise ValueError(f"window [{s}, {t}] collapses to a single grid point (Δt={p.dt})")
    return i, j


def psi(p: SampledPath, a, b: float, s: float, t: float) -> complex:
    """Ψ_{s,t}(a, b) by the trapezoidal rule on the grid points between s and t"""
    vec = as_frequency(p, a)
    i, j = snap_window(p, s, t)
    r = p.times[i:j + 1]
    integrand = np.exp(1j * (p.values[i:j + 1] @ vec) - 2.0 * b * r)
    return complex(trapezoid(integrand, dx=p.dt))


def phi(p: SampledPath, a, s: float, t: float) -> complex:
    """Φ_{s,t}(a); identical to Ψ with b = 0"""
    return psi(p, a, 0.0, s, t)


@njit(cache=True)
def _k_sup_kernel(dphase, decay, dt):
    # S_k = Ψ^{w^{t_k}}_{0,T-t_k} satisfies S_k = dt/2 (1 + f_k) + f_k S_{k+1}
    best = 0.0
    acc = 0j
    for k in range(dphase.size - 1, -1, -1):
        f = cmath.exp(1j * dphase[k] - decay)
        acc = 0.5 * dt * (1.0 + f) + f * acc
        mag = abs(acc)
        if mag > best:
            best = mag
    return best


def k_sup(p: SampledPath, a, b: float) -> float:
    """
    K(a, b) = max over grid times s of |Ψ^{w^s}_{0,T-s}(a, b)|

    All shifted integrals are obtained in one backward sweep over the grid.
    """
    if b < 0:
        raise ValueError(f"b must be nonnegative, got {b}")
    vec = as_frequency(p, a)
    dphase = np.ascontiguousarray(p.increments() @ vec)
    return float(_k_sup_kernel(dphase, 2.0 * b * p.dt, p.dt))


def k_sup_bound(norm: float, rho: float, theta: float, a, b: float, constant: float = 1.0) -> float:
    """C·‖Φ‖_{ρ,γ}·|b|^{1-θ} / (1 + |a|^ρ), the decay bound on K for |b| >= 1"""
    if abs(b) < 1.0:
        raise ValueError(f"the K bound needs |b| >= 1, got b={b}")
    mag = float(np.linalg.norm(np.atleast_1d(a)))
    return constant * norm * abs(b) ** (1.0 - theta) / (1.0 + mag**rho)


def fit_k_constant(
    paths: Sequence[SampledPath],
    norms: Sequence[float],
    rhos: Sequence[float],
    a,
    b: float,
    theta: float,
) -> float:
    """Smallest constant making k_sup_bound hold on a calibration ensemble"""
    if len(paths) == 0 or not len(paths) == len(norms) == len(rhos):
        raise ValueError("need matching, nonempty lists of paths, norms and rhos")
    ratios = []
    for p, norm, rho in zip(paths, norms, rhos):
        bound = k_sup_bound(norm, rho, theta, a, b)
        if bound > 0:
            ratios.append(k_sup(p, a, b) / bound)
    if not ratios:
        raise ValueError("all calibration norms vanish; cannot fit a constant")
    return float(max(ratios))


def dyadic_windows(p: SampledPath, max_levels: int = 10, min_window_steps: int = 4) -> np.ndarray:
    """
    Index pairs of the dyadic windows [k·m_ℓ, (k+1)·m_ℓ], m_ℓ = N // 2^ℓ steps

    Levels stop once windows would be shorter than min_window_steps.
    """
    pairs: List[np.ndarray] = []
    for level in range(max_levels + 1):
        m = p.n_steps // 2**level
        if m < min_window_steps:
            break
        starts = np.arange(2**level) * m
        pairs.append(np.column_stack([starts, starts + m]))
    if not pairs:
        raise ValueError(
            f"path with N={p.n_steps} steps has no window of {min_window_steps} steps"
        )
    return np.concatenate(pairs, axis=0)


def oscillatory_scan(
    p: SampledPath,
    a_grid: Iterable[float],
    direction: Optional[Sequence[float]] = None,
    max_levels: int = 10,
    min_window_steps: int = 4,
) -> OscillatoryScan:
    """
    |Φ_{s,t}(a·e)| for every frequency on a_grid and every dyadic window

    Args:
        p: the sampled path
        a_grid: strictly increasing frequency magnitudes
        direction: unit direction e in R^d (default (1, ..., 1)/√d)
        max_levels: deepest dyadic level
        min_window_steps: shortest window, in grid steps
    """
    a_grid = np.asarray(list(a_grid), dtype=float)
    if direction is None:
        e = np.ones(p.dim) / np.sqrt(p.dim)
    else:
        e = as_frequency(p, direction)
        e = e / np.linalg.norm(e)

    idx = dyadic_windows(p, max_levels, min_window_steps)
    projected = p.values @ e
    mags = np.empty((a_grid.size, idx.shape[0]))
    for k, a in enumerate(a_grid):
        cum = cumulative_trapezoid(np.exp(1j * a * projected), dx=p.dt, initial=0)
        mags[k] = np.abs(cum[idx[:, 1]] - cum[idx[:, 0]])

    times = p.times
    return OscillatoryScan(
        a_grid=a_grid,
        direction=e,
        window_pairs=np.column_stack([times[idx[:, 0]], times[idx[:, 1]]]),
        magnitudes=mags,
    )


def finite_grid_norm(scan: OscillatoryScan, rho: float, gamma: float) -> float:
    """max over the scan of (1+|a|)^ρ |Φ_{s,t}(a)| / (t-s)^γ"""
    if rho < 0:
        raise ValueError(f"rho must be nonnegative, got {rho}")
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    weighted = scan.magnitudes / scan.window_lengths[None, :] ** gamma
    return float(np.max((1.0 + scan.a_grid)[:, None] ** rho * weighted))
