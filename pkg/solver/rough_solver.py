"""
Rough-flux scalar conservation law on the unit torus

    ∂_t u + ∂_x A(u) ∘ dw = 0,   u(0) = u0

solved path step by path step as the autonomous law run for pseudo-time |Δw_k| with the
flux sign following sign(Δw_k), using a monotone finite-volume scheme.
"""
from typing import Sequence

import numpy as np

from rough_paths import SampledPath
from utils.errors import NumericalInvariantError

from .flux import Flux
from .models import CONSERVATION_TOL, MAX_PRINCIPLE_TOL, GridSolution
from .schemes import rough_substeps

SCHEMES = ("engquist_osher", "godunov")


def snap_output_times(p: SampledPath, output_times: Sequence[float]) -> np.ndarray:
    """Grid indices of the requested output times; each must be a path grid time"""
    times = np.asarray(list(output_times), dtype=float)
    if times.size == 0:
        raise ValueError("need at least one output time")
    idx = np.array([p.index_of(t) for t in times], dtype=np.int64)
    off_grid = np.abs(idx * p.dt - times) > 1e-9 * p.dt
    if np.any(off_grid):
        raise ValueError(
            f"output times must lie on the path grid (Δt={p.dt}): {times[off_grid].tolist()}"
        )
    return np.unique(idx)


def audit_solution(sol: GridSolution) -> None:
    """Raise NumericalInvariantError unless the solution keeps the scheme's guarantees"""
    if not np.all(np.isfinite(sol.u)):
        raise NumericalInvariantError("finiteness", f"non-finite state in solution of {sol.path_ref}")
    lo, hi = float(sol.u0.min()), float(sol.u0.max())
    below = float(lo - sol.u.min())
    above = float(sol.u.max() - hi)
    if below > MAX_PRINCIPLE_TOL or above > MAX_PRINCIPLE_TOL:
        raise NumericalInvariantError(
            "max principle", f"range [{sol.u.min()}, {sol.u.max()}] leaves [{lo}, {hi}]"
        )
    drift = float(np.max(np.abs(sol.masses() - sol.u0.sum() * sol.dx)))
    if drift > CONSERVATION_TOL * sol.nx:
        raise NumericalInvariantError("conservation", f"mass drift {drift:.3e} with nx={sol.nx}")


def solve_rough(
    f: Flux,
    p: SampledPath,
    u0: Sequence[float],
    nx: int,
    cfl: float = 0.9,
    output_times: Sequence[float] = (),
    scheme: str = "engquist_osher",
) -> GridSolution:
    """
    Solve the rough conservation law driven by a one-dimensional path

    Args:
        f: flux A
        p: one-dimensional driving path
        u0: initial cell averages (nx entries)
        nx: number of cells on the unit torus
        cfl: CFL number in (0, 1]
        output_times: path grid times at which to record u (default: 0 and T)
        scheme: "engquist_osher" (default) or "godunov"

    Returns:
        GridSolution, audited for finiteness, max principle and conservation
    """
    if p.dim != 1:
        raise ValueError(f"the solver needs a one-dimensional path, got d={p.dim}")
    if not 0.0 < cfl <= 1.0:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl}")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme '{scheme}' (expected one of {SCHEMES})")
    u0 = np.array(u0, dtype=float)
    if u0.shape != (nx,):
        raise ValueError(f"u0 must have nx={nx} entries, got shape {u0.shape}")
    if not np.all(np.isfinite(u0)):
        raise ValueError("u0 must be finite")
    if not list(output_times):
        output_times = (0.0, p.horizon)
    out_idx = snap_output_times(p, output_times)

    records = []
    state = u0
    substeps = 0
    pending = list(out_idx)
    for sub in rough_substeps(f, p, u0, cfl, scheme=scheme, last_step=int(out_idx[-1])):
        while pending and pending[0] <= sub.step:
            records.append(state)
            pending.pop(0)
        state = sub.u_after
        substeps += 1
        if not np.all(np.isfinite(state)):
            raise NumericalInvariantError(
                "finiteness", f"NaN/inf after substep {substeps} (path step {sub.step})"
            )
    records.extend(state for _ in pending)

    sol = GridSolution(
        nx=nx,
        times=out_idx * p.dt,
        time_indices=out_idx,
        u=np.array(records),
        u0=u0,
        cfl=cfl,
        scheme=scheme,
        path_ref=p.ref,
        flux_coeffs=list(f.coeffs),
        substeps=substeps,
    )
    audit_solution(sol)
    return sol
