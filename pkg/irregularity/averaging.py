"""
Numerical check of the velocity-averaging integral bound

    ∬_{K×K} f1(v1) f2(v2) / (1 + |n (a(v1) - a(v2))|^ρ) dv1 dv2 ≲ ‖f1‖₂ ‖f2‖₂ |n|^{-ρ}
"""
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

from solver.flux import pairwise_nondegeneracy

from .models import AveragingCheck

NONDEG_GRID = 256


def _trapezoid_weights(v: np.ndarray) -> np.ndarray:
    dv = np.diff(v)
    w = np.zeros_like(v)
    w[:-1] += 0.5 * dv
    w[1:] += 0.5 * dv
    return w


def check_averaging_bound(
    f1: Sequence[float],
    f2: Sequence[float],
    v_grid: Sequence[float],
    a_fn: Sequence[float],
    rho: float,
    n_list: Sequence[int],
    nu: float = 1.0,
) -> AveragingCheck:
    """
    Ratios LHS(n)·|n|^ρ / (‖f1‖₂‖f2‖₂) for each n in n_list

    Args:
        f1, f2: nonnegative samples on v_grid
        v_grid: strictly increasing velocities covering the compact interval K
        a_fn: samples of a(v) on v_grid
        rho: decay exponent in (0, 1/ν)
        n_list: nonzero integer frequencies
        nu: degeneracy order of a on K

    Returns:
        AveragingCheck; the ratios should stay bounded uniformly in n
    """
    v = np.asarray(v_grid, dtype=float)
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    a_vals = np.asarray(a_fn, dtype=float)
    if not (v.shape == f1.shape == f2.shape == a_vals.shape) or v.ndim != 1 or v.size < 2:
        raise ValueError("f1, f2, a and v_grid must be 1-D samples on the same grid")
    if np.any(np.diff(v) <= 0):
        raise ValueError("v_grid must be strictly increasing")
    if np.any(f1 < 0) or np.any(f2 < 0):
        raise ValueError("f1 and f2 must be nonnegative")
    if rho <= 0 or rho * nu >= 1.0:
        raise ValueError(f"need 0 < rho < 1/nu, got rho={rho}, nu={nu}")
    if not n_list or any(int(n) == 0 for n in n_list):
        raise ValueError("n_list must contain nonzero integers")

    # non-degeneracy is checked on a subsample; the full pairwise matrix is only needed below
    step = max(1, v.size // NONDEG_GRID)
    c = pairwise_nondegeneracy(v[::step], a_vals[::step], nu)
    if c <= 0.0:
        raise ValueError(f"a is degenerate at order nu={nu} on the grid (c = 0)")

    w = _trapezoid_weights(v)
    g1, g2 = w * f1, w * f2
    norm1 = np.sqrt(trapezoid(f1**2, v))
    norm2 = np.sqrt(trapezoid(f2**2, v))
    if norm1 == 0.0 or norm2 == 0.0:
        raise ValueError("f1 and f2 must not vanish identically")

    gap = np.abs(a_vals[:, None] - a_vals[None, :])
    lhs = np.empty(len(n_list))
    for k, n in enumerate(n_list):
        kernel = 1.0 / (1.0 + (abs(int(n)) * gap) ** rho)
        lhs[k] = g1 @ kernel @ g2
    ratios = lhs * np.abs(np.asarray(n_list, dtype=float)) ** rho / (norm1 * norm2)

    return AveragingCheck(
        rho=rho,
        nu=nu,
        nondegeneracy_c=c,
        n_list=[int(n) for n in n_list],
        lhs=lhs,
        ratios=ratios,
        l1_product=float(np.sum(g1) * np.sum(g2)),
    )
