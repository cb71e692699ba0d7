"""
The kinetic function χ(u, v) and velocity averages u^φ = ∫ χ(u, v) φ(v) dv
"""
from typing import Callable, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


def chi(u: float, v: float) -> int:
    """+1 if 0 < v < u, -1 if u < v < 0, 0 otherwise (including v = 0 and v = u)"""
    if 0.0 < v < u:
        return 1
    if u < v < 0.0:
        return -1
    return 0


def chi_values(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """χ(u[..., None], v[None, ...]) as int8"""
    uu = np.asarray(u, dtype=float)[..., None]
    vv = np.asarray(v, dtype=float)
    pos = (0.0 < vv) & (vv < uu)
    neg = (uu < vv) & (vv < 0.0)
    return pos.astype(np.int8) - neg.astype(np.int8)


class KineticField(BaseModel):
    """χ(u(t, x), v) on a grid of states and Kruzhkov levels"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: np.ndarray = Field(description="States, any shape")
    v_levels: np.ndarray
    values: np.ndarray = Field(description="χ values in {-1, 0, 1}, shape u.shape + (len(v),)")

    @model_validator(mode="after")
    def _check_values(self) -> "KineticField":
        if self.values.shape != self.u.shape + self.v_levels.shape:
            raise ValueError("values must have shape u.shape + v_levels.shape")
        if not np.array_equal(self.values, chi_values(self.u, self.v_levels)):
            raise ValueError("values do not match χ recomputed from u")
        return self


def chi_field(u: np.ndarray, v_levels: Sequence[float]) -> KineticField:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v_levels, dtype=float)
    return KineticField(u=u, v_levels=v, values=chi_values(u, v))


def piecewise_linear_antiderivative(v_levels: np.ndarray, samples: np.ndarray) -> Callable:
    """
    Exact antiderivative F (F(v_0) = 0) of the piecewise-linear interpolant of samples

    Outside [v_0, v_last] the integrand is taken as zero, so F is constant there.
    """
    v = np.asarray(v_levels, dtype=float)
    s = np.asarray(samples)
    h = np.diff(v)
    nodes = np.concatenate([[0.0], np.cumsum(0.5 * h * (s[:-1] + s[1:]))])

    def F(x):
        x = np.clip(np.asarray(x, dtype=float), v[0], v[-1])
        k = np.clip(np.searchsorted(v, x, side="right") - 1, 0, v.size - 2)
        d = x - v[k]
        slope = (s[k + 1] - s[k]) / h[k]
        return nodes[k] + s[k] * d + 0.5 * slope * d * d

    return F


def velocity_average(
    u_field: np.ndarray,
    phi: Union[Callable, Sequence[float]],
    v_levels: Sequence[float],
) -> np.ndarray:
    """
    u^φ(x) = ∫ χ(u(x), v) φ(v) dv = ∫_0^{u(x)} φ(v) dv

    φ is a callable or its samples on v_levels; it is integrated exactly as a
    piecewise-linear function of v.
    """
    v = np.asarray(v_levels, dtype=float)
    if v.ndim != 1 or v.size < 2 or np.any(np.diff(v) <= 0):
        raise ValueError("v_levels must be strictly increasing")
    u = np.asarray(u_field, dtype=float)
    lo, hi = min(float(u.min()), 0.0), max(float(u.max()), 0.0)
    if v[0] > lo or v[-1] < hi:
        raise ValueError(f"v_levels [{v[0]}, {v[-1]}] must cover the range [{lo}, {hi}] of u and 0")
    samples = phi(v) if callable(phi) else np.asarray(phi, dtype=float)
    samples = np.broadcast_to(np.asarray(samples, dtype=float), v.shape)
    F = piecewise_linear_antiderivative(v, samples)
    return F(u) - F(0.0)
