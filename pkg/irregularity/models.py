"""
Result types of the irregularity estimators
"""
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

QUADRATURE_TOL = 1e-12


class OscillatoryScan(BaseModel):
    """|Φ_{s,t}(a)| over a frequency grid and a family of time windows"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    a_grid: np.ndarray = Field(description="Strictly increasing frequency magnitudes |a|")
    direction: np.ndarray = Field(description="Unit vector e; the frequencies are a·e")
    window_pairs: np.ndarray = Field(description="Rows (s, t) with 0 <= s < t <= T")
    magnitudes: np.ndarray = Field(description="|Φ_{s,t}(a)|, shape (len(a_grid), len(window_pairs))")

    @model_validator(mode="after")
    def _check_shapes(self) -> "OscillatoryScan":
        a = self.a_grid
        if a.ndim != 1 or a.size < 1 or np.any(np.diff(a) <= 0):
            raise ValueError("a_grid must be a strictly increasing 1-D array")
        w = self.window_pairs
        if w.ndim != 2 or w.shape[1] != 2 or np.any(w[:, 1] <= w[:, 0]) or np.any(w[:, 0] < 0):
            raise ValueError("window_pairs must be rows (s, t) with 0 <= s < t")
        if self.magnitudes.shape != (a.size, w.shape[0]):
            raise ValueError(
                f"magnitudes must have shape ({a.size}, {w.shape[0]}), got {self.magnitudes.shape}"
            )
        lengths = w[:, 1] - w[:, 0]
        if np.any(self.magnitudes > lengths[None, :] * (1.0 + 1e-9) + QUADRATURE_TOL):
            raise ValueError("|Φ_{s,t}(a)| exceeds the trivial bound t - s")
        return self

    @property
    def window_lengths(self) -> np.ndarray:
        return self.window_pairs[:, 1] - self.window_pairs[:, 0]


class IrregularityReport(BaseModel):
    """Estimated (ρ, γ)-irregularity of a path"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho_hat: float = Field(ge=0.0)
    gamma_used: float = Field(gt=0.0, le=1.0)
    norm_estimate: float = Field(ge=0.0, description="Finite-grid estimate of ‖Φ^w‖_{ρ,γ}")
    scan: OscillatoryScan
    sup_profile: np.ndarray = Field(description="D(a) = max over windows |Φ|/(t-s)^γ")
    fit_quality: float
    degenerate: bool = Field(default=False, description="Set for constant paths (no decay in a)")


class IotaEstimate(BaseModel):
    """Estimated scaling index ι of a path"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    iota_hat: float = Field(ge=0.0, le=1.5)
    per_alpha: List[Tuple[float, float, float]] = Field(
        description="Rows (α, slope of log I vs log λ, fit quality)"
    )
    lambda_grid: np.ndarray
    constant_C: float = Field(ge=0.0)
    integrals: np.ndarray = Field(description="I(λ; α), shape (len(per_alpha), len(lambda_grid))")
    zero_fraction: float = Field(ge=0.0, le=1.0, description="Share of lag cells with |w^r_t| = 0")
    flagged: bool = Field(default=False, description="Too many exact-zero increments")

    @model_validator(mode="after")
    def _check_grid(self) -> "IotaEstimate":
        lam = self.lambda_grid
        if lam.ndim != 1 or lam.size < 2 or np.any(np.diff(lam) <= 0) or lam[0] < 1.0:
            raise ValueError("lambda_grid must be strictly increasing with lambda_min >= 1")
        for alpha, _, _ in self.per_alpha:
            if not -1.0 < alpha < 0.0:
                raise ValueError(f"alpha must lie in (-1, 0), got {alpha}")
        return self

    @property
    def per_alpha_iota(self) -> np.ndarray:
        return np.array([(-1.0 - slope) / alpha for alpha, slope, _ in self.per_alpha])


class AveragingCheck(BaseModel):
    """Normalized averaging-integral ratios LHS(n)·|n|^ρ / (‖f1‖₂‖f2‖₂)"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho: float
    nu: float
    nondegeneracy_c: float = Field(ge=0.0)
    n_list: List[int]
    lhs: np.ndarray
    ratios: np.ndarray
    l1_product: float = Field(description="‖f1‖₁‖f2‖₁, the pointwise bound on LHS(n)")

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.ratios))


class InterpolationCheck(BaseModel):
    """Finite-grid recheck of the interpolation inequality between irregularity norms"""

    kappa: float = Field(gt=0.0, le=1.0)
    rho: float = Field(description="Interpolated decay exponent ρ̂κ")
    gamma: float = Field(description="Interpolated window exponent 1 - κ(1 - γ)")
    lhs: float
    rhs: float
    margin: float = Field(description="rhs - lhs; nonnegative when the check passes")
    passed: bool
