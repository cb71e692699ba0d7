"""
Path generators for the driving signal w: fractional Brownian motion (exact, circulant
embedding with a Cholesky fallback), Brownian motion, deterministic paths and sums
"""
import hashlib
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import cholesky, toeplitz

from .sampled_path import SampledPath

UINT64_MAX = 2**64 - 1


def _check_grid_args(n_steps: int, horizon: float, dim: int = 1, min_steps: int = 1):
    if n_steps < min_steps:
        raise ValueError(f"n_steps must be at least {min_steps}, got {n_steps}")
    if not horizon > 0:
        raise ValueError(f"horizon T must be positive, got {horizon}")
    if dim < 1:
        raise ValueError(f"dimension d must be positive, got {dim}")


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if seed < 0 or seed > UINT64_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def derive_seed(master_seed: int, index: int) -> int:
    """Seed of realization `index` in an ensemble driven by `master_seed`"""
    digest = hashlib.blake2b(
        f"{_check_seed(master_seed)}:{int(index)}".encode("ascii"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "little")


def fgn_autocovariance(hurst: float, n: int) -> np.ndarray:
    """Autocovariance r(k), k = 0..n, of unit-step fractional Gaussian noise"""
    k = np.arange(n + 1, dtype=float)
    two_h = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** two_h - 2.0 * k**two_h + np.abs(k - 1) ** two_h)


def _circulant_eigenvalues(r: np.ndarray) -> Optional[np.ndarray]:
    """Eigenvalues of the minimal circulant embedding, or None if it is not nonnegative"""
    n = r.size - 1
    row = np.concatenate([r, r[n - 1:0:-1]])
    eig = np.fft.fft(row).real
    if eig.min() < -1e-10 * eig.max():
        return None
    return np.clip(eig, 0.0, None)


def _fgn_davies_harte(eig: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    m = eig.size
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    y = np.fft.fft(np.sqrt(eig / m) * z)
    return y[:n].real


def _fgn_cholesky(factor: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return factor @ rng.standard_normal(factor.shape[0])


def generate_fbm(hurst: float, dim: int, n_steps: int, horizon: float, seed: int) -> SampledPath:
    """
    Exact fractional Brownian motion on the grid t_k = kT/N

    Increments are fractional Gaussian noise sampled by circulant embedding of the
    increment covariance. When the embedding is not nonnegative-definite the covariance
    matrix is factorized directly instead. Components are independent.

    Args:
        hurst: Hurst index H in (0, 1)
        dim: number of independent components d
        n_steps: number of grid steps N (at least 2)
        horizon: time horizon T > 0
        seed: 64-bit unsigned seed; equal inputs give bit-identical paths

    Returns:
        SampledPath of kind "fbm"
    """
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"Hurst index must lie in (0, 1), got {hurst}")
    _check_grid_args(n_steps, horizon, dim, min_steps=2)
    seed = _check_seed(seed)

    r = fgn_autocovariance(hurst, n_steps)
    eig = _circulant_eigenvalues(r)
    factor = None
    if eig is None:
        print(
            f"[WARNING] circulant embedding not nonnegative-definite for H={hurst}, "
            f"N={n_steps}; using Cholesky factorization"
        )
        factor = cholesky(toeplitz(r[:n_steps]), lower=True)

    rng = np.random.default_rng(seed)
    scale = (horizon / n_steps) ** hurst
    values = np.zeros((n_steps + 1, dim))
    for j in range(dim):
        if factor is None:
            noise = _fgn_davies_harte(eig, n_steps, rng)
        else:
            noise = _fgn_cholesky(factor, rng)
        values[1:, j] = np.cumsum(scale * noise)

    return SampledPath(
        dim=dim, horizon=horizon, n_steps=n_steps, values=values,
        kind="fbm", seed=seed, hurst=hurst,
    )


def generate_brownian(dim: int, n_steps: int, horizon: float, seed: int) -> SampledPath:
    """Standard Brownian motion from i.i.d. Gaussian increments of variance T/N"""
    _check_grid_args(n_steps, horizon, dim)
    seed = _check_seed(seed)
    rng = np.random.default_rng(seed)
    steps = rng.standard_normal((n_steps, dim)) * np.sqrt(horizon / n_steps)
    values = np.zeros((n_steps + 1, dim))
    values[1:] = np.cumsum(steps, axis=0)
    return SampledPath(
        dim=dim, horizon=horizon, n_steps=n_steps, values=values,
        kind="brownian", seed=seed, hurst=0.5,
    )


def generate_deterministic(
    kind: str,
    n_steps: int,
    horizon: float,
    values: Optional[Sequence] = None,
    dim: int = 1,
) -> SampledPath:
    """
    Deterministic paths: "linear" (w_t = t in every component) or "custom" (given samples)

    Custom samples are shifted so that the path starts at the origin; only increments
    enter any downstream quantity.
    """
    _check_grid_args(n_steps, horizon, dim)
    if kind == "linear":
        t = np.arange(n_steps + 1) * (horizon / n_steps)
        t[-1] = horizon
        data = np.repeat(t[:, None], dim, axis=1)
    elif kind == "custom":
        if values is None:
            raise ValueError("custom paths need sampled values")
        data = np.array(values, dtype=float)
        if data.ndim == 1:
            data = data[:, None]
        if data.shape[0] != n_steps + 1:
            raise ValueError(
                f"custom path needs exactly N+1 = {n_steps + 1} values, got {data.shape[0]}"
            )
        dim = data.shape[1]
        data = data - data[0]
    else:
        raise ValueError(f"unknown deterministic path kind '{kind}' (expected linear or custom)")
    return SampledPath(dim=dim, horizon=horizon, n_steps=n_steps, values=data, kind=kind)


def generate_weierstrass(
    alpha: float, n_steps: int, horizon: float, n_terms: Optional[int] = None, dim: int = 1
) -> SampledPath:
    """
    Deterministic α-Hölder path g(t) = Σ_k 2^{-αk} (cos(2π 2^k t/T) - 1)

    By default the series stops at the last frequency resolved by the grid.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"Hölder index alpha must lie in (0, 1), got {alpha}")
    _check_grid_args(n_steps, horizon, dim, min_steps=2)
    if n_terms is None:
        n_terms = max(1, int(np.floor(np.log2(n_steps))))
    if n_terms < 1:
        raise ValueError(f"n_terms must be positive, got {n_terms}")
    s = np.arange(n_steps + 1) / n_steps
    g = np.zeros(n_steps + 1)
    for k in range(n_terms):
        g += 2.0 ** (-alpha * k) * (np.cos(2.0 * np.pi * 2.0**k * s) - 1.0)
    g[0] = 0.0
    data = np.repeat(g[:, None], dim, axis=1)
    return SampledPath(
        dim=dim, horizon=horizon, n_steps=n_steps, values=data, kind="weierstrass", alpha=alpha,
    )


def _summands(p: SampledPath) -> np.ndarray:
    if p.kind == "sum" and p.leaf_values is not None:
        return p.leaf_values
    return p.values[None, :, :]


def _summand_refs(p: SampledPath) -> List[str]:
    if p.kind == "sum" and p.leaf_refs:
        return list(p.leaf_refs)
    return [p.ref]


def sum_paths(p: SampledPath, q: SampledPath) -> SampledPath:
    """
    Pointwise sum of two paths on the same grid

    The sum is taken over the flattened summands in sorted order per grid point, so
    that nested sums are exactly associative and commutative.
    """
    if not p.same_grid(q):
        raise ValueError(
            f"grid mismatch: (d={p.dim}, N={p.n_steps}, T={p.horizon}) vs "
            f"(d={q.dim}, N={q.n_steps}, T={q.horizon})"
        )
    leaves = np.concatenate([_summands(p), _summands(q)], axis=0)
    ordered = np.sort(leaves, axis=0)
    total = ordered[0].copy()
    for leaf in ordered[1:]:
        total += leaf
    return SampledPath(
        dim=p.dim, horizon=p.horizon, n_steps=p.n_steps, values=total,
        kind="sum", leaf_values=leaves, leaf_refs=sorted(_summand_refs(p) + _summand_refs(q)),
    )


def scale_path(p: SampledPath, factor: float) -> SampledPath:
    """The path c·w"""
    return SampledPath(
        dim=p.dim, horizon=p.horizon, n_steps=p.n_steps, values=factor * p.values, kind="custom",
    )


def shift_path(p: SampledPath, s: float) -> SampledPath:
    """The increment path w^s_r = w_{s+r} - w_s for r in [0, T-s] on the native grid"""
    i = p.index_of(s)
    if i >= p.n_steps:
        raise ValueError(f"shift s={s} leaves no grid step before T={p.horizon}")
    n = p.n_steps - i
    return SampledPath(
        dim=p.dim, horizon=n * p.dt, n_steps=n, values=p.values[i:] - p.values[i], kind="custom",
    )
