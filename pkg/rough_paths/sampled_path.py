"""
Sampled driving paths w: [0,T] -> R^d on a uniform time grid
"""
import hashlib
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

PathKind = Literal["fbm", "brownian", "linear", "custom", "sum", "weierstrass"]


class SampledPath(BaseModel):
    """A d-dimensional path sampled at t_k = kT/N, k = 0..N, starting at the origin"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int = Field(gt=0, description="Spatial dimension d of the path")
    horizon: float = Field(gt=0, description="Time horizon T")
    n_steps: int = Field(gt=0, description="Number of grid steps N")
    values: np.ndarray = Field(description="Array of shape (N+1, d)")
    kind: PathKind
    seed: Optional[int] = Field(default=None, description="Generation seed (random kinds only)")
    hurst: Optional[float] = Field(default=None, description="Hurst index H for fbm/brownian")
    alpha: Optional[float] = Field(default=None, description="Hölder index of a weierstrass path")
    leaf_values: Optional[np.ndarray] = Field(
        default=None, description="Stacked summands (m, N+1, d) of a sum path"
    )
    leaf_refs: Optional[List[str]] = Field(
        default=None, description="Sorted refs of the summands of a sum path"
    )

    @field_validator("values", mode="before")
    @classmethod
    def _as_float_matrix(cls, v):
        arr = np.array(v, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        return arr

    @model_validator(mode="after")
    def _check_grid(self) -> "SampledPath":
        values = self.values
        if values.ndim != 2 or values.shape != (self.n_steps + 1, self.dim):
            raise ValueError(
                f"values must have shape ({self.n_steps + 1}, {self.dim}), got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("path values must be finite")
        if np.any(values[0] != 0.0):
            raise ValueError("paths start at the origin: values[0] must be 0")
        values.setflags(write=False)
        if self.leaf_values is not None:
            if self.leaf_values.ndim != 3 or self.leaf_values.shape[1:] != values.shape:
                raise ValueError("leaf_values must stack summands on the path grid")
            self.leaf_values.setflags(write=False)
        return self

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    @property
    def scalar(self) -> np.ndarray:
        """The values of a one-dimensional path as a flat array"""
        if self.dim != 1:
            raise ValueError(f"scalar view needs a one-dimensional path, got d={self.dim}")
        return self.values[:, 0]

    def increments(self) -> np.ndarray:
        """w_{t_{k+1}} - w_{t_k}, shape (N, d)"""
        return np.diff(self.values, axis=0)

    def index_of(self, t: float) -> int:
        """Snap a time to the nearest grid index, rejecting times outside [0, T]"""
        tol = 1e-12 * self.horizon
        if t < -tol or t > self.horizon + tol:
            raise ValueError(f"time {t} outside [0, {self.horizon}]")
        return int(round(t / self.dt))

    @property
    def ref(self) -> str:
        """Short identifier used to tag solutions and output rows"""
        if self.kind == "sum" and self.leaf_refs:
            parts = [f"sum({'+'.join(self.leaf_refs)})"]
        else:
            parts = [self.kind]
        if self.hurst is not None:
            parts.append(f"H={self.hurst:g}")
        if self.alpha is not None:
            parts.append(f"alpha={self.alpha:g}")
        parts.append(f"d={self.dim}")
        parts.append(f"N={self.n_steps}")
        parts.append(f"T={self.horizon:g}")
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        if self.kind in ("custom", "sum"):
            parts.append(f"digest={self.digest()}")
        return ":".join(parts)

    def digest(self) -> str:
        """Short content hash of the sampled values"""
        data = np.ascontiguousarray(self.values, dtype=np.float64).tobytes()
        return hashlib.blake2b(data, digest_size=4).hexdigest()

    def same_grid(self, other: "SampledPath") -> bool:
        return (
            self.dim == other.dim
            and self.n_steps == other.n_steps
            and abs(self.horizon - other.horizon) <= 1e-12 * max(self.horizon, other.horizon)
        )


class HoelderEstimate(BaseModel):
    """Fitted Hölder exponent of a sampled path"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eta_hat: float = Field(ge=0.0, le=1.0)
    modulus: np.ndarray = Field(description="Rows (h, sup_k |w_{t_k+h} - w_{t_k}|)")
    fit_quality: float
    degenerate: bool = Field(default=False, description="Set for constant paths")

    @model_validator(mode="after")
    def _check_modulus(self) -> "HoelderEstimate":
        m = self.modulus
        if m.ndim != 2 or m.shape[1] != 2:
            raise ValueError("modulus must be an array of (h, M(h)) rows")
        if np.any(m < 0):
            raise ValueError("modulus entries must be nonnegative")
        if np.any(np.diff(m[:, 0]) <= 0):
            raise ValueError("modulus lags must be strictly increasing")
        return self
