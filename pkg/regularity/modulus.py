"""
L¹ moduli of continuity of cell averages on the unit torus
"""
import math
from typing import Optional

import numpy as np

from solver import GridSolution

from .models import ModulusCurve


def _check_field(field) -> np.ndarray:
    u = np.asarray(field, dtype=float)
    if u.ndim != 1 or u.size < 2:
        raise ValueError(f"field needs at least 2 cells, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise ValueError("field must be finite")
    return u


def shift_l1(u: np.ndarray, shift: int) -> float:
    """‖u(· + shift·Δx) - u‖_{L¹}, summed exactly rounded so cell order does not matter"""
    return math.fsum(np.abs(np.roll(u, -shift) - u)) / u.size


def default_levels(nx: int) -> int:
    """All dyadic lags up to half the torus"""
    return max(1, int(math.floor(math.log2(nx))))


def l1_modulus(field, n_levels: Optional[int] = None) -> ModulusCurve:
    """
    ω(h) at h = 2^ℓ Δx, ℓ = 0..n_levels-1, by circular shifting

    Args:
        field: cell averages on the torus
        n_levels: number of dyadic lags (at least 4, 2^n_levels <= nx)
    """
    u = _check_field(field)
    nx = u.size
    if n_levels is None:
        n_levels = default_levels(nx)
    if n_levels < 4:
        raise ValueError(f"n_levels must be at least 4, got {n_levels}")
    if 2**n_levels > nx:
        raise ValueError(f"2^n_levels = {2**n_levels} exceeds nx = {nx}")
    shifts = 2 ** np.arange(n_levels)
    omega = np.array([shift_l1(u, int(s)) for s in shifts])
    return ModulusCurve(
        lags=shifts / nx,
        omega=omega,
        field_l1=math.fsum(np.abs(u)) / nx,
        nx=nx,
    )


def time_averaged_modulus(sol: GridSolution, n_levels: Optional[int] = None) -> ModulusCurve:
    """Mean of ω(h, t) over the output times t > 0"""
    rows = [k for k, t in enumerate(sol.times) if t > 0]
    if not rows:
        raise ValueError("solution has no output time t > 0")
    curves = [l1_modulus(sol.u[k], n_levels) for k in rows]
    return ModulusCurve(
        lags=curves[0].lags,
        omega=np.mean([c.omega for c in curves], axis=0),
        field_l1=float(np.mean([c.field_l1 for c in curves])),
        nx=sol.nx,
        time_averaged=True,
    )
