"""
Initial data on the unit torus as exact cell averages
"""
import numpy as np

from .models import TORUS_LENGTH


def cell_edges(nx: int) -> np.ndarray:
    if nx < 2:
        raise ValueError(f"need at least 2 cells, got nx={nx}")
    return np.arange(nx + 1) * (TORUS_LENGTH / nx)


def _periodic_overlap(lo: np.ndarray, hi: np.ndarray, a: float, b: float) -> np.ndarray:
    """Length of [lo, hi) ∩ ([a, b) mod 1) for cells inside [0, 1)"""
    total = np.zeros_like(lo)
    for shift in (-1.0, 0.0, 1.0):
        total += np.clip(np.minimum(hi, b + shift) - np.maximum(lo, a + shift), 0.0, None)
    return total


def riemann(ul: float, ur: float, x0: float, nx: int) -> np.ndarray:
    """ul on [x0 - 1/2, x0) and ur on [x0, x0 + 1/2), modulo 1"""
    edges = cell_edges(nx)
    dx = edges[1] - edges[0]
    left = _periodic_overlap(edges[:-1], edges[1:], x0 - 0.5, x0) / dx
    left = np.clip(left, 0.0, 1.0)
    return ul * left + ur * (1.0 - left)


def sine(amp: float, freq: int, nx: int) -> np.ndarray:
    """amp·sin(2π·freq·x)"""
    if freq == 0:
        return np.zeros(nx)
    edges = cell_edges(nx)
    k = 2.0 * np.pi * freq
    dx = edges[1] - edges[0]
    return amp * (np.cos(k * edges[:-1]) - np.cos(k * edges[1:])) / (k * dx)


def lacunary(lambda0: float, n_modes: int, nx: int, normalize: bool = True) -> np.ndarray:
    """
    Σ_{j=1..J} 2^{-λ0 j} cos(2π 2^j x), of Besov regularity exactly λ0

    With normalize the series is divided by its sup norm Σ_j 2^{-λ0 j} (attained at x = 0).
    """
    if not 0.0 < lambda0 <= 1.0:
        raise ValueError(f"lambda0 must lie in (0, 1], got {lambda0}")
    if n_modes < 1:
        raise ValueError(f"n_modes must be positive, got {n_modes}")
    edges = cell_edges(nx)
    dx = edges[1] - edges[0]
    field = np.zeros(nx)
    weights = 2.0 ** (-lambda0 * np.arange(1, n_modes + 1))
    for j, wt in enumerate(weights, start=1):
        k = 2.0 * np.pi * 2.0**j
        field += wt * (np.sin(k * edges[1:]) - np.sin(k * edges[:-1])) / (k * dx)
    if normalize:
        field /= weights.sum()
    return field


def constant(value: float, nx: int) -> np.ndarray:
    cell_edges(nx)
    return np.full(nx, float(value))


def build_initial_data(kind: str, nx: int, **params) -> np.ndarray:
    """Dispatch on the preset name: riemann, sine, lacunary or constant"""
    builders = {
        "riemann": lambda: riemann(params.get("ul", 1.0), params.get("ur", 0.0), params.get("x0", 0.25), nx),
        "sine": lambda: sine(params.get("amp", 0.1), int(params.get("freq", 1)), nx),
        "lacunary": lambda: lacunary(params.get("lambda0", 0.3), int(params.get("n_modes", 10)), nx),
        "constant": lambda: constant(params.get("value", 0.0), nx),
    }
    if kind not in builders:
        raise ValueError(f"unknown initial data '{kind}' (expected one of {sorted(builders)})")
    return builders[kind]()
