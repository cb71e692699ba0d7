"""
Weak-form checker with test functions transported along the characteristics:

    ∫ χ(t,x,v) ψ(x - a(v) w_t, v) = ∫ χ(0,x,v) ψ(x,v) - ∫_0^t ∫ m(r,x,v) ∂_v[ψ(x - a(v) w_r, v)]

for ψ(x, v) = e^{2πinx} b(v). χ is taken piecewise constant on the cells, so the
x-integral of each cell is exact; the v-integrals of χ are exact for the
piecewise-linear interpolant of ψ on a fine velocity grid. The measure is paired at
time-block midpoints, cell averages in x and the Kruzhkov levels in v.
"""
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from rough_paths import SampledPath
from solver import Flux, GridSolution, KineticMeasure
from utils.tables import write_csv

from .chi import piecewise_linear_antiderivative

FREQUENCIES = (0, 1, -1, 2, -2, 4, -4)
WIDTH_FRACTIONS = (0.2, 0.3, 0.45)
CENTER_FRACTION = 0.55
FINE_POINTS = 2049


class TestFunction(BaseModel):
    """ψ(x, v) = e^{2πinx} b((v - center)/half_width) with b(s) = exp(-1/(1 - s²))"""

    model_config = ConfigDict(frozen=True)
    __test__ = False

    n: int
    bump_id: int
    center: float
    half_width: float = Field(gt=0.0)

    @property
    def support(self):
        return self.center - self.half_width, self.center + self.half_width

    def bump(self, v: np.ndarray) -> np.ndarray:
        s = (np.asarray(v, dtype=float) - self.center) / self.half_width
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
        return out

    def bump_derivative(self, v: np.ndarray) -> np.ndarray:
        s = (np.asarray(v, dtype=float) - self.center) / self.half_width
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        si = s[inside]
        out[inside] = np.exp(-1.0 / (1.0 - si**2)) * (-2.0 * si / (1.0 - si**2) ** 2) / self.half_width
        return out


class WeakFormReport(BaseModel):
    """Per-test-function residuals of the transported weak formulation"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    catalog: List[TestFunction] = Field(min_length=1)
    residuals: np.ndarray
    residuals_without_measure: np.ndarray
    t_eval: float
    nx: int
    n_levels: int
    truncation_fraction: float = Field(ge=0.0, le=1.0)

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))

    @property
    def max_residual_without_measure(self) -> float:
        return float(np.max(self.residuals_without_measure))


def default_catalog(v_lo: float, v_hi: float) -> List[TestFunction]:
    """ψ_{n,ℓ} for n in {0, ±1, ±2, ±4} and three bump widths inside [v_lo, v_hi]"""
    if not v_hi > v_lo:
        raise ValueError(f"need v_lo < v_hi, got [{v_lo}, {v_hi}]")
    span = v_hi - v_lo
    center = v_lo + CENTER_FRACTION * span
    return [
        TestFunction(n=n, bump_id=k, center=center, half_width=frac * span)
        for n in FREQUENCIES
        for k, frac in enumerate(WIDTH_FRACTIONS)
    ]


def _cell_fourier(n: int, nx: int) -> np.ndarray:
    """∫_cell e^{2πinx} dx for each cell of the unit torus"""
    dx = 1.0 / nx
    centers = (np.arange(nx) + 0.5) * dx
    factor = dx if n == 0 else dx * np.sinc(n * dx)
    return factor * np.exp(2j * np.pi * n * centers)


def _chi_pairing(u: np.ndarray, psi: TestFunction, a_fn, w_t: float) -> complex:
    """∫_x ∫_v χ(u(x), v) ψ(x - a(v) w_t, v)"""
    lo, hi = psi.support
    v = np.linspace(lo, hi, FINE_POINTS)
    g = psi.bump(v) * np.exp(-2j * np.pi * psi.n * a_fn(v) * w_t)
    G = piecewise_linear_antiderivative(v, g)
    return complex(np.sum(_cell_fourier(psi.n, u.size) * (G(u) - G(0.0))))


def _measure_pairing(
    m: KineticMeasure, psi: TestFunction, f: Flux, w_mid: np.ndarray, weights: np.ndarray
) -> complex:
    """∫∫∫ m ∂_v[ψ(x - a(v) w_r, v)] with block weights for truncation"""
    v = m.v_levels
    mass = m.density * m.cell_volumes()
    spatial = np.tensordot(mass, _cell_fourier(psi.n, m.nx) / m.dx, axes=([1], [0]))
    phase = np.exp(-2j * np.pi * psi.n * np.outer(w_mid, f.a(v)))
    dpsi = phase * (
        psi.bump_derivative(v)[None, :]
        - 2j * np.pi * psi.n * np.outer(w_mid, f.a_prime(v)) * psi.bump(v)[None, :]
    )
    return complex(np.sum(weights[:, None] * spatial * dpsi))


def weak_form_residual(
    sol: GridSolution,
    m: Optional[KineticMeasure],
    p: SampledPath,
    f: Flux,
    t_eval: float,
    psi_catalog: Optional[Sequence[TestFunction]] = None,
) -> WeakFormReport:
    """
    Residual |LHS - initial term + measure term| for every test function

    Args:
        sol: candidate solution
        m: candidate measure (signed measures are accepted); None means m = 0
        p: driving path
        f: flux A
        t_eval: an output time of the solution
        psi_catalog: test functions (default: default_catalog over the measure levels)

    Returns:
        WeakFormReport, also listing the residuals with the measure term dropped
    """
    if p.ref != sol.path_ref:
        raise ValueError(f"solution was driven by {sol.path_ref}, not {p.ref}")
    u_t = sol.at(t_eval)
    if m is not None and m.nx != sol.nx:
        raise ValueError(f"measure has nx={m.nx}, solution has nx={sol.nx}")
    if m is not None:
        v_lo, v_hi = float(m.v_levels[0]), float(m.v_levels[-1])
    else:
        lo = float(min(sol.u0.min(), sol.u.min(), 0.0))
        hi = float(max(sol.u0.max(), sol.u.max(), 0.0))
        pad = 0.05 * (hi - lo) if hi > lo else 0.05
        v_lo, v_hi = lo - pad, hi + pad
    catalog = list(psi_catalog) if psi_catalog is not None else default_catalog(v_lo, v_hi)
    if not catalog:
        raise ValueError("test-function catalog is empty")
    for psi in catalog:
        lo, hi = psi.support
        if lo < v_lo - 1e-12 or hi > v_hi + 1e-12:
            raise ValueError(
                f"test function n={psi.n}, bump {psi.bump_id} has support [{lo}, {hi}] "
                f"outside the level coverage [{v_lo}, {v_hi}]"
            )

    w_t = float(p.scalar[p.index_of(t_eval)])
    truncation = 0.0
    if m is not None:
        t0, t1 = m.t_edges[:-1], m.t_edges[1:]
        weights = np.clip((t_eval - t0) / (t1 - t0), 0.0, 1.0)
        w_mid = np.interp(0.5 * (t0 + t1), p.times, p.scalar)
        block_tv = np.sum(np.abs(m.density) * m.cell_volumes(), axis=(1, 2))
        straddle = (weights > 0.0) & (weights < 1.0)
        if m.total_variation > 0:
            truncation = float(np.sum(block_tv[straddle] * (1.0 - weights[straddle])) / m.total_variation)

    residuals, bare = [], []
    for psi in catalog:
        lhs = _chi_pairing(u_t, psi, f.a, w_t)
        init = _chi_pairing(sol.u0, psi, f.a, 0.0)
        meas = _measure_pairing(m, psi, f, w_mid, weights) if m is not None else 0.0
        residuals.append(abs(lhs - init + meas))
        bare.append(abs(lhs - init))

    return WeakFormReport(
        catalog=catalog,
        residuals=np.array(residuals),
        residuals_without_measure=np.array(bare),
        t_eval=float(t_eval),
        nx=sol.nx,
        n_levels=0 if m is None else int(m.v_levels.size),
        truncation_fraction=min(truncation, 1.0),
    )


def write_weak_form_csv(report: WeakFormReport, path) -> int:
    """Rows (n, bump_id, residual, residual_without_measure) plus a summary row"""
    rows = [
        (psi.n, psi.bump_id, r, r0)
        for psi, r, r0 in zip(report.catalog, report.residuals, report.residuals_without_measure)
    ]
    rows.append(("max", "", report.max_residual, report.max_residual_without_measure))
    return write_csv(path, ["n", "bump_id", "residual", "residual_without_measure"], rows)
