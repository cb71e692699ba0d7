"""
Closed-form regularity thresholds and the right-hand side of the main estimate
"""
from typing import Dict, List, Sequence

import numpy as np
from scipy.integrate import trapezoid

from rough_paths import SampledPath, holder_seminorm
from solver import GridSolution, KineticMeasure

from .models import BoundTerms, InterplayResult


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")


def _check_nu(nu: float) -> None:
    if nu < 1:
        raise ValueError(f"nu must be at least 1, got {nu}")


def _check_hurst(hurst: float, name: str = "H") -> None:
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {hurst}")


def predicted_lambda_main(rho: float, gamma: float, eta: float, nu: float) -> float:
    """
    Threshold for a path that is (ρ, γ)-irregular and η-Hölder with a ν-nondegenerate flux

        λ* = [ρ(η+1) - (1-γ)] / [m(η+1) + (1-γ)]  ∧  [ρ + 2m] / [m(2η+1) + (1-γ)],  m = max(νρ, 1)
    """
    _require_positive(rho=rho, gamma=gamma, eta=eta)
    if gamma > 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    _check_nu(nu)
    m = max(nu * rho, 1.0)
    slack = 1.0 - gamma
    first = (rho * (eta + 1.0) - slack) / (m * (eta + 1.0) + slack)
    second = (rho + 2.0 * m) / (m * (2.0 * eta + 1.0) + slack)
    return float(min(first, second))


def predicted_lambda_fbm(hurst: float, nu: float) -> float:
    """λ* = 1 / ((ν ∨ 2H)(H+1) + H); equals 1/(1+2H) for ν = 1 and H <= 1/2"""
    _check_hurst(hurst)
    _check_nu(nu)
    return 1.0 / (max(nu, 2.0 * hurst) * (hurst + 1.0) + hurst)


def predicted_s_star(eta: float, iota: float) -> float:
    """s* = (1 + η - ι) / (1 + η + ι) for Burgers-type fluxes and the scaling index ι"""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    if not 0.5 <= iota <= 1.0:
        raise ValueError(f"iota must lie in [1/2, 1], got {iota}")
    return (1.0 + eta - iota) / (1.0 + eta + iota)


def interplay_pairs(h1: float, nu1: float, h2: float) -> InterplayResult:
    """Solve ν₂(H₂+1) + H₂ = ν₁(H₁+1) + H₁ for ν₂; infeasible when ν₂ < 1"""
    _check_hurst(h1, "H1")
    _check_hurst(h2, "H2")
    _check_nu(nu1)
    nu2 = (nu1 * (h1 + 1.0) + h1 - h2) / (h2 + 1.0)
    return InterplayResult(h1=h1, nu1=nu1, h2=h2, nu2=nu2, feasible=nu2 >= 1.0)


def exponents_table(
    hursts: Sequence[float] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    nu: float = 1.0,
) -> List[Dict[str, float]]:
    """
    Rows of predicted thresholds for fBm driving paths

    Each row carries the fBm threshold, the s* threshold at η = H with ι = max(H, 1/2),
    and 1/(1+2H) for comparison.
    """
    rows = []
    for hurst in hursts:
        hurst = float(hurst)
        rows.append(
            {
                "H": hurst,
                "nu": float(nu),
                "lambda_fbm": predicted_lambda_fbm(hurst, nu),
                "s_star": predicted_s_star(hurst, max(hurst, 0.5)),
                "one_over_1_plus_2H": 1.0 / (1.0 + 2.0 * hurst),
            }
        )
    return rows


def theorem_bound_terms(
    sol: GridSolution, m: KineticMeasure, p: SampledPath, eta: float
) -> BoundTerms:
    """
    ‖u0‖_{L¹}, ‖u‖_{L¹_{t,x}} (trapezoid over the output times) and ‖w‖_η·‖a'(v) m‖_TV

    Args:
        sol: solution whose path_ref is p.ref
        m: entropy defect of the same run
        p: driving path
        eta: Hölder index used for ‖w‖_η
    """
    if sol.path_ref != p.ref:
        raise ValueError(f"solution was computed with path {sol.path_ref}, got {p.ref}")
    if m.nx != sol.nx:
        raise ValueError(f"measure has nx={m.nx}, solution has nx={sol.nx}")
    dx = sol.dx
    l1_per_time = np.sum(np.abs(sol.u), axis=1) * dx
    if sol.times.size > 1:
        u_l1_tx = float(trapezoid(l1_per_time, sol.times))
    else:
        u_l1_tx = 0.0
    return BoundTerms(
        u0_l1=float(np.sum(np.abs(sol.u0)) * dx),
        u_l1_tx=u_l1_tx,
        holder_seminorm=holder_seminorm(p, eta),
        weighted_tv=m.weighted_tv,
        eta=eta,
    )

