"""
Solution and entropy-defect containers
"""
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

TORUS_LENGTH = 1.0
MAX_PRINCIPLE_TOL = 1e-12
CONSERVATION_TOL = 1e-12


class GridSolution(BaseModel):
    """Cell averages u(t_k, x_j) of the rough conservation law on the unit torus"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    nx: int = Field(gt=1)
    times: np.ndarray = Field(description="Output times (grid times of the driving path)")
    time_indices: np.ndarray = Field(description="Path grid indices of the output times")
    u: np.ndarray = Field(description="Cell averages, shape (len(times), nx)")
    u0: np.ndarray = Field(description="Initial cell averages")
    cfl: float = Field(gt=0.0, le=1.0)
    scheme: str = "engquist_osher"
    path_ref: str
    flux_coeffs: List[float]
    substeps: int = Field(ge=0, description="Total monotone substeps taken")

    @model_validator(mode="after")
    def _check_shapes(self) -> "GridSolution":
        if self.u0.shape != (self.nx,):
            raise ValueError(f"u0 must have {self.nx} cells, got shape {self.u0.shape}")
        if self.u.shape != (self.times.size, self.nx):
            raise ValueError(f"u must have shape ({self.times.size}, {self.nx}), got {self.u.shape}")
        if self.time_indices.shape != self.times.shape:
            raise ValueError("time_indices and times must have the same length")
        for arr in (self.times, self.time_indices, self.u, self.u0):
            arr.setflags(write=False)
        return self

    @property
    def dx(self) -> float:
        return TORUS_LENGTH / self.nx

    @property
    def x_centers(self) -> np.ndarray:
        return (np.arange(self.nx) + 0.5) * self.dx

    def masses(self) -> np.ndarray:
        """Σ_j u(t_k, x_j) Δx per output time"""
        return self.u.sum(axis=1) * self.dx

    def at(self, t: float) -> np.ndarray:
        """The state at an output time"""
        k = int(np.argmin(np.abs(self.times - t)))
        if not np.isclose(self.times[k], t, rtol=0.0, atol=1e-9 * max(1.0, abs(t))):
            raise ValueError(f"time {t} is not an output time")
        return self.u[k]


class KineticMeasure(BaseModel):
    """
    Entropy-defect measure m on (time block, x cell, Kruzhkov level) cells

    density holds m per unit (t, x) volume at each level; cell volumes are
    block length × Δx × level weight, the level weights being trapezoidal in v.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    v_levels: np.ndarray
    level_weights: np.ndarray
    t_edges: np.ndarray = Field(description="Time-block edges, strictly increasing")
    nx: int = Field(gt=1)
    density: np.ndarray = Field(description="Shape (n_blocks, nx, n_levels)")
    total_variation: float = Field(ge=0.0)
    weighted_tv: float = Field(ge=0.0)
    violations: int = Field(default=0, ge=0, description="Cells below the negative tolerance")
    min_density: float = Field(default=0.0, description="Most negative density before clamping")

    @model_validator(mode="after")
    def _check_cells(self) -> "KineticMeasure":
        v = self.v_levels
        if v.ndim != 1 or v.size < 2 or np.any(np.diff(v) <= 0):
            raise ValueError("v_levels must be strictly increasing")
        if self.level_weights.shape != v.shape:
            raise ValueError("level_weights must match v_levels")
        if np.any(np.diff(self.t_edges) <= 0):
            raise ValueError("t_edges must be strictly increasing")
        expected = (self.t_edges.size - 1, self.nx, v.size)
        if self.density.shape != expected:
            raise ValueError(f"density must have shape {expected}, got {self.density.shape}")
        tv = float(np.sum(np.abs(self.density) * self.cell_volumes()))
        if not np.isclose(tv, self.total_variation, rtol=1e-9, atol=1e-300):
            raise ValueError("total_variation must equal Σ|density|·cell volume")
        return self

    @property
    def dx(self) -> float:
        return TORUS_LENGTH / self.nx

    @property
    def block_lengths(self) -> np.ndarray:
        return np.diff(self.t_edges)

    def cell_volumes(self) -> np.ndarray:
        """Broadcastable (n_blocks, 1, n_levels) volumes"""
        return self.block_lengths[:, None, None] * self.dx * self.level_weights[None, None, :]

    def block_level_mass(self) -> np.ndarray:
        """Mass per (time block, level), integrated over x and the level weight"""
        return np.sum(self.density * self.cell_volumes(), axis=1)

    @property
    def is_nonnegative(self) -> bool:
        return self.violations == 0


def total_variation_of(density: np.ndarray, t_edges: np.ndarray, nx: int, weights: np.ndarray) -> float:
    vol = np.diff(t_edges)[:, None, None] * (TORUS_LENGTH / nx) * weights[None, None, :]
    return float(np.sum(np.abs(density) * vol))
