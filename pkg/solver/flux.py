"""
Polynomial fluxes A: R -> R and their monotone numerical fluxes
"""
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, Field, PrivateAttr, field_validator

ROOT_IMAG_TOL = 1e-4
DEFAULT_RANGE = (-1.0, 1.0)
DEFAULT_GRID = 256


def _real_roots(poly: Polynomial) -> np.ndarray:
    if poly.degree() < 1:
        return np.empty(0)
    roots = poly.roots()
    # multiple roots come back with small imaginary parts; extra knots are harmless
    keep = np.abs(np.imag(roots)) <= ROOT_IMAG_TOL * (1.0 + np.abs(np.real(roots)))
    return np.unique(np.real(roots[keep]))


def pairwise_nondegeneracy(v: np.ndarray, a_vals: np.ndarray, nu: float) -> float:
    """min over grid pairs v_i != v_j of |a(v_i) - a(v_j)| / |v_i - v_j|^ν"""
    v = np.asarray(v, dtype=float)
    a_vals = np.asarray(a_vals, dtype=float)
    if v.shape != a_vals.shape or v.ndim != 1:
        raise ValueError("v and a(v) must be 1-D arrays of equal length")
    dv = np.abs(v[:, None] - v[None, :])
    da = np.abs(a_vals[:, None] - a_vals[None, :])
    off = dv > 0
    if not np.any(off):
        raise ValueError("need at least two distinct velocities")
    return float(np.min(da[off] / dv[off] ** nu))


class Flux(BaseModel):
    """
    A polynomial flux A(u) = Σ_k coeffs[k] u^k with its derivative a = A'

    The Engquist-Osher splitting uses the exact antiderivative P(u) = A(u) - A(0) and
    Q(u) = ∫_0^u |a|, evaluated piecewise between the real roots of a.
    """

    coeffs: List[float] = Field(description="Ascending polynomial coefficients of A")
    nu: float = Field(default=1.0, ge=1.0, description="Degeneracy order ν")
    c_estimate: float = Field(default=0.0, ge=0.0, description="Non-degeneracy constant c")

    _A: Polynomial = PrivateAttr()
    _a: Polynomial = PrivateAttr()
    _a_prime: Polynomial = PrivateAttr()
    _knots: np.ndarray = PrivateAttr()
    _knot_q: np.ndarray = PrivateAttr()
    _signs: np.ndarray = PrivateAttr()
    _critical: np.ndarray = PrivateAttr()
    _speed_critical: np.ndarray = PrivateAttr()

    @field_validator("coeffs")
    @classmethod
    def _nonempty_finite(cls, v):
        if len(v) == 0:
            raise ValueError("flux needs at least one coefficient")
        if not np.all(np.isfinite(v)):
            raise ValueError("flux coefficients must be finite")
        return [float(c) for c in v]

    def model_post_init(self, __context) -> None:
        self._A = Polynomial(self.coeffs)
        self._a = self._A.deriv()
        self._a_prime = self._a.deriv()
        self._critical = _real_roots(self._a)
        self._speed_critical = _real_roots(self._a_prime)

        knots = np.unique(np.concatenate([self._critical, [0.0]]))
        mids = np.concatenate([
            [knots[0] - 1.0], 0.5 * (knots[:-1] + knots[1:]), [knots[-1] + 1.0]
        ])
        signs = np.sign(self._a(mids))
        # Q at the knots, anchored at Q(0) = 0
        zero = int(np.searchsorted(knots, 0.0))
        p_knots = self._A(knots)
        steps = np.abs(np.diff(p_knots))
        q = np.zeros(knots.size)
        q[zero + 1:] = np.cumsum(steps[zero:])
        q[:zero] = -np.cumsum(steps[:zero][::-1])[::-1]
        self._knots, self._knot_q, self._signs = knots, q, signs

    @property
    def degree(self) -> int:
        return int(self._A.degree())

    def A(self, u):
        return self._A(u)

    def a(self, v):
        """Characteristic speed a = A'"""
        return self._a(v)

    def a_prime(self, v):
        return self._a_prime(v)

    def negated(self) -> "Flux":
        return Flux(coeffs=[-c for c in self.coeffs], nu=self.nu, c_estimate=self.c_estimate)

    def oriented(self, sign: float) -> "Flux":
        """The flux driving a path increment of the given sign"""
        return self if sign >= 0 else self.negated()

    def q_abs(self, u):
        """Q(u) = ∫_0^u |a(v)| dv"""
        u = np.asarray(u, dtype=float)
        idx = np.searchsorted(self._knots, u, side="right") - 1
        anchor = np.clip(idx, 0, self._knots.size - 1)
        s = self._signs[idx + 1]
        return self._knot_q[anchor] + s * (self._A(u) - self._A(self._knots[anchor]))

    def eo_parts(self, u) -> Tuple[np.ndarray, np.ndarray]:
        """(f+, f-) with f+(u) = ∫_0^u max(a, 0) and f-(u) = ∫_0^u min(a, 0)"""
        p = self._A(u) - self._A(0.0)
        q = self.q_abs(u)
        return 0.5 * (p + q), 0.5 * (p - q)

    def engquist_osher(self, ul, ur):
        """Engquist-Osher numerical flux F(ul, ur) = A(0) + f+(ul) + f-(ur)"""
        plus, _ = self.eo_parts(ul)
        _, minus = self.eo_parts(ur)
        return self._A(0.0) + plus + minus

    def godunov(self, ul, ur):
        """Godunov flux: min of A on [ul, ur] if ul <= ur, else max of A on [ur, ul]"""
        ul = np.asarray(ul, dtype=float)
        ur = np.asarray(ur, dtype=float)
        lo, hi = np.minimum(ul, ur), np.maximum(ul, ur)
        fl, fr = self._A(ul), self._A(ur)
        vmin, vmax = np.minimum(fl, fr), np.maximum(fl, fr)
        for c in self._critical:
            inside = (lo < c) & (c < hi)
            fc = self._A(c)
            vmin = np.where(inside, np.minimum(vmin, fc), vmin)
            vmax = np.where(inside, np.maximum(vmax, fc), vmax)
        return np.where(ul <= ur, vmin, vmax)

    def numerical_flux(self, scheme: str):
        if scheme == "engquist_osher":
            return self.engquist_osher
        if scheme == "godunov":
            return self.godunov
        raise ValueError(f"unknown scheme '{scheme}' (expected engquist_osher or godunov)")

    def max_speed(self, lo: float, hi: float) -> float:
        """max |a(v)| for v in [lo, hi]"""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        pts = [lo, hi] + [c for c in self._speed_critical if lo < c < hi]
        return float(np.max(np.abs(self._a(np.array(pts)))))


def make_flux(coeffs: Sequence[float], v_range: Tuple[float, float] = DEFAULT_RANGE) -> Flux:
    """
    Build a Flux from ascending coefficients of A

    ν defaults to max(1, deg a) and c is estimated on v_range by check_nondegeneracy.
    Burgers A(u) = u²/2 is make_flux([0, 0, 0.5]).
    """
    if len(coeffs) == 0:
        raise ValueError("flux needs at least one coefficient")
    # trailing zeros do not raise the degree
    trimmed = list(coeffs)
    while len(trimmed) > 1 and trimmed[-1] == 0:
        trimmed.pop()
    if len(trimmed) < 2:
        raise ValueError(f"flux must have degree at least 1, got coefficients {list(coeffs)}")
    flux = Flux(coeffs=trimmed)
    flux.nu = float(max(1, flux.degree - 1))
    check_nondegeneracy(flux, flux.nu, v_range, DEFAULT_GRID)
    return flux


def check_nondegeneracy(
    f: Flux, nu: float, v_range: Tuple[float, float] = DEFAULT_RANGE, n_grid: int = DEFAULT_GRID
) -> float:
    """
    Grid estimate of c in |a(v2) - a(v1)| >= c |v2 - v1|^ν on v_range

    The result is stored on the flux together with ν. c = 0 signals degeneracy at order ν.
    """
    if nu < 1:
        raise ValueError(f"nu must be at least 1, got {nu}")
    if n_grid < 64:
        raise ValueError(f"n_grid must be at least 64, got {n_grid}")
    lo, hi = v_range
    if not hi > lo:
        raise ValueError(f"v_range must be a nonempty interval, got {v_range}")
    v = np.linspace(lo, hi, n_grid)
    c = pairwise_nondegeneracy(v, f.a(v), nu)
    f.nu = float(nu)
    f.c_estimate = c
    return c
