"""
Regularity result types
"""
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class ModulusCurve(BaseModel):
    """ω(h) = ‖u(· + h) - u‖_{L¹(T)} on dyadic lags"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lags: np.ndarray = Field(description="Dyadic lags h, strictly increasing")
    omega: np.ndarray
    field_l1: float = Field(ge=0.0)
    nx: int = Field(gt=1)
    time_averaged: bool = False

    @model_validator(mode="after")
    def _check_curve(self) -> "ModulusCurve":
        if self.lags.shape != self.omega.shape or self.lags.ndim != 1:
            raise ValueError("lags and omega must be 1-D arrays of equal length")
        if np.any(np.diff(self.lags) <= 0):
            raise ValueError("lags must be strictly increasing")
        if np.any(self.omega < 0):
            raise ValueError("omega must be nonnegative")
        # triangle inequality; time averages of the bound hold as well
        if np.any(self.omega > 2.0 * self.field_l1 * (1.0 + 1e-12) + 1e-300):
            raise ValueError("omega exceeds 2‖u‖_L1")
        return self


class RegularityReport(BaseModel):
    """Fitted Besov exponent of a field (or of its time-averaged modulus)"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lambda_hat: float = Field(ge=0.0, le=1.0)
    curve: ModulusCurve
    fit_range: Tuple[int, int] = Field(description="Index range [lo, hi) of the lags used")
    fit_quality: float
    gagliardo: Optional[List[Tuple[float, float]]] = Field(
        default=None, description="(λ, seminorm) pairs"
    )
    time_averaged: bool = False
    smooth: bool = Field(default=False, description="ω vanishes on the fit range")


class InterplayResult(BaseModel):
    """ν₂ with ν₂(H₂+1)+H₂ = ν₁(H₁+1)+H₁"""

    h1: float
    nu1: float
    h2: float
    nu2: float
    feasible: bool = Field(description="False when ν₂ < 1")


class BoundTerms(BaseModel):
    """The three right-hand-side quantities of the main regularity estimate"""

    u0_l1: float = Field(ge=0.0, description="‖u0‖_{L¹}")
    u_l1_tx: float = Field(ge=0.0, description="‖u‖_{L¹_{t,x}}")
    holder_seminorm: float = Field(ge=0.0, description="‖w‖_η")
    weighted_tv: float = Field(ge=0.0, description="‖a'(v) m‖_TV")
    eta: float

    @property
    def measure_term(self) -> float:
        return self.holder_seminorm * self.weighted_tv
