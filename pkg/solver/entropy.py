"""
Entropy-defect (kinetic) measure of a computed solution

For each Kruzhkov level v the numerical entropy flux of the monotone scheme is
G_v(ul, ur) = F(ul ∨ v, ur ∨ v) - F(ul ∧ v, ur ∧ v), and the discrete entropy production
of a substep in cell j is

    P_j(v) = -(|u_j^+ - v| - |u_j - v| + (δτ/Δx)(G_{j+1/2} - G_{j-1/2}))  >= 0.

Since ∂_t|u - v| + ∂_x q_v ẇ = -2m(·, v), the mass of m at level v in a cell is P·Δx/2.
"""
from typing import Optional, Sequence

import numpy as np

from rough_paths import SampledPath

from .flux import Flux
from .models import GridSolution, KineticMeasure, total_variation_of
from .schemes import rough_substeps

NEGATIVE_TOL = 1e-8
DEFAULT_LEVELS = 64
LEVEL_MARGIN = 0.05
MAX_BLOCKS = 32


def default_levels(u_min: float, u_max: float, n: int = DEFAULT_LEVELS) -> np.ndarray:
    """n uniform Kruzhkov levels over the data range widened by 5% on each side"""
    span = u_max - u_min
    margin = LEVEL_MARGIN * span if span > 0 else LEVEL_MARGIN
    return np.linspace(u_min - margin, u_max + margin, n)


def level_weights(v_levels: np.ndarray) -> np.ndarray:
    """Trapezoidal weights of the levels in v"""
    dv = np.diff(v_levels)
    w = np.zeros_like(v_levels)
    w[:-1] += 0.5 * dv
    w[1:] += 0.5 * dv
    return w


def block_edges(sol: GridSolution, p: SampledPath, max_blocks: int = MAX_BLOCKS) -> np.ndarray:
    """Path indices of the time-block edges: uniform blocks refined at the output times"""
    last = int(sol.time_indices[-1])
    if last == 0:
        raise ValueError("solution has no time evolution (last output time is 0)")
    step = max(1, -(-last // max_blocks))
    edges = set(range(0, last + 1, step)) | {last} | {int(k) for k in sol.time_indices}
    return np.array(sorted(edges), dtype=np.int64)


def entropy_fluxes(numflux, ul: np.ndarray, ur: np.ndarray, v: np.ndarray) -> np.ndarray:
    """G_v(ul, ur) for all levels at once, shape (nx, n_levels)"""
    ulv, urv = ul[:, None], ur[:, None]
    vv = v[None, :]
    return numflux(np.maximum(ulv, vv), np.maximum(urv, vv)) - numflux(
        np.minimum(ulv, vv), np.minimum(urv, vv)
    )


def entropy_defect(
    sol: GridSolution,
    f: Flux,
    p: SampledPath,
    v_levels: Optional[Sequence[float]] = None,
    max_blocks: int = MAX_BLOCKS,
) -> KineticMeasure:
    """
    Replay the solve and record the Kruzhkov entropy production on (t, x, v) cells

    Args:
        sol: solution produced by solve_rough with the same flux and path
        f: flux A
        p: driving path
        v_levels: increasing levels spanning the solution range (default: 64 levels)
        max_blocks: number of uniform time blocks before refinement at output times

    Returns:
        KineticMeasure; productions down to -1e-8·max are clamped to 0, larger negative
        values are kept and counted as violations
    """
    if p.ref != sol.path_ref:
        raise ValueError(f"solution was driven by {sol.path_ref}, not {p.ref}")
    if [float(c) for c in f.coeffs] != list(sol.flux_coeffs):
        raise ValueError("solution was computed with a different flux")
    u_lo = float(min(sol.u0.min(), sol.u.min()))
    u_hi = float(max(sol.u0.max(), sol.u.max()))
    if v_levels is None:
        v = default_levels(u_lo, u_hi)
    else:
        v = np.asarray(v_levels, dtype=float)
        if v.ndim != 1 or v.size < 2 or np.any(np.diff(v) <= 0):
            raise ValueError("v_levels must be strictly increasing")
        if v[0] > u_lo or v[-1] < u_hi:
            raise ValueError(f"v_levels [{v[0]}, {v[-1]}] must span the data range [{u_lo}, {u_hi}]")

    edges_idx = block_edges(sol, p, max_blocks)
    n_blocks = edges_idx.size - 1
    production = np.zeros((n_blocks, sol.nx, v.size))

    last = int(sol.time_indices[-1])
    state = sol.u0
    for sub in rough_substeps(f, p, sol.u0, sol.cfl, scheme=sol.scheme, last_step=last):
        numflux = sub.flux.numerical_flux(sol.scheme)
        u, u_next = sub.u_before, sub.u_after
        g = entropy_fluxes(numflux, u, np.roll(u, -1), v)
        change = np.abs(u_next[:, None] - v[None, :]) - np.abs(u[:, None] - v[None, :])
        prod = -(change + sub.ratio * (g - np.roll(g, 1, axis=0)))
        block = int(np.searchsorted(edges_idx, sub.step, side="right") - 1)
        production[block] += prod
        state = u_next

    if not np.allclose(state, sol.u[-1], rtol=0.0, atol=1e-12):
        raise ValueError("replayed state does not match the solution; was it solved with this path?")

    dx = 1.0 / sol.nx
    block_len = np.diff(edges_idx) * p.dt
    # mass P·Δx/2 per cell, turned into a density per unit (t, x) volume
    density = production * dx / 2.0 / (block_len[:, None, None] * dx)

    scale = float(np.max(np.abs(density))) if density.size else 0.0
    tol = NEGATIVE_TOL * scale
    min_density = float(density.min()) if density.size else 0.0
    violating = density < -tol
    violations = int(np.count_nonzero(violating))
    density = np.where((density < 0) & ~violating, 0.0, density)

    t_edges = edges_idx * p.dt
    weights = level_weights(v)
    tv = total_variation_of(density, t_edges, sol.nx, weights)
    a_prime = np.abs(f.a_prime(v))
    weighted = total_variation_of(density * a_prime[None, None, :], t_edges, sol.nx, weights)

    if violations:
        print(
            f"[WARNING] {violations} entropy-production cells below -{NEGATIVE_TOL:g}·max "
            f"(min density {min_density:.3e})"
        )
    return KineticMeasure(
        v_levels=v,
        level_weights=weights,
        t_edges=t_edges,
        nx=sol.nx,
        density=density,
        total_variation=tv,
        weighted_tv=weighted,
        violations=violations,
        min_density=min(min_density, 0.0),
    )
