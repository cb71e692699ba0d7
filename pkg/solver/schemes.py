"""
Monotone finite-volume substeps and the sign-aware rough time change
"""
import math
from typing import Callable, Iterator, NamedTuple, Optional

import numpy as np

from rough_paths import SampledPath

from .flux import Flux

NumericalFlux = Callable[[np.ndarray, np.ndarray], np.ndarray]


def interface_fluxes(u: np.ndarray, numflux: NumericalFlux) -> np.ndarray:
    """F_{j+1/2} = F(u_j, u_{j+1}) on the periodic grid"""
    return numflux(u, np.roll(u, -1))


def monotone_substep(u: np.ndarray, numflux: NumericalFlux, ratio: float) -> np.ndarray:
    """u_j - (δτ/Δx)(F_{j+1/2} - F_{j-1/2}) in conservative periodic form"""
    f = interface_fluxes(u, numflux)
    return u - ratio * (f - np.roll(f, 1))


def total_variation(u: np.ndarray) -> float:
    """Periodic total variation Σ_j |u_{j+1} - u_j|"""
    return float(np.sum(np.abs(np.roll(u, -1) - u)))


def substep_count(increment: float, speed: float, cfl: float, dx: float) -> int:
    """Smallest n with speed·(|increment|/n)/dx <= cfl"""
    if increment == 0.0:
        return 0
    return max(1, math.ceil(abs(increment) * speed / (cfl * dx)))


class Substep(NamedTuple):
    step: int
    sign: float
    ratio: float
    flux: Flux
    u_before: np.ndarray
    u_after: np.ndarray


def rough_substeps(
    flux: Flux,
    path: SampledPath,
    u0: np.ndarray,
    cfl: float,
    scheme: str = "engquist_osher",
    last_step: Optional[int] = None,
) -> Iterator[Substep]:
    """
    Yield every monotone substep of the piecewise-linear rough time change

    Path step k runs ∂_τ u + sign(Δw_k) ∂_x A(u) = 0 for pseudo-time |Δw_k|, split into
    substeps that respect max|a(u)|·δτ/Δx <= cfl. Zero increments are skipped.
    """
    u = np.array(u0, dtype=float)
    nx = u.size
    dx = 1.0 / nx
    speed = flux.max_speed(float(u.min()), float(u.max()))
    oriented = {1.0: flux.oriented(1.0), -1.0: flux.oriented(-1.0)}
    numfluxes = {s: f.numerical_flux(scheme) for s, f in oriented.items()}
    increments = path.increments()[:, 0]
    n_steps = path.n_steps if last_step is None else last_step
    for k in range(n_steps):
        dw = float(increments[k])
        n_sub = substep_count(dw, speed, cfl, dx)
        if n_sub == 0:
            continue
        sign = 1.0 if dw > 0 else -1.0
        ratio = (abs(dw) / n_sub) / dx
        for _ in range(n_sub):
            u_next = monotone_substep(u, numfluxes[sign], ratio)
            yield Substep(k, sign, ratio, oriented[sign], u, u_next)
            u = u_next
