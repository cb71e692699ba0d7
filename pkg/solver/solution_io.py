"""
Solution and measure serialization

Binary layout (little-endian): int64 nx, int64 n_times, then n_times rows of nx + 1
float64 values, each row being (t_k, u(t_k, x_0), ..., u(t_k, x_{nx-1})).
"""
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from utils.tables import write_csv

from .models import GridSolution, KineticMeasure

HEADER_DTYPE = np.dtype("<i8")
VALUE_DTYPE = np.dtype("<f8")


def write_solution_csv(sol: GridSolution, path: Union[str, Path]) -> int:
    """Rows (t, x, u) with x the cell centers"""
    x = sol.x_centers
    rows = ((t, x[j], sol.u[k, j]) for k, t in enumerate(sol.times) for j in range(sol.nx))
    return write_csv(path, ["t", "x", "u"], rows)


def write_solution_binary(sol: GridSolution, path: Union[str, Path]) -> int:
    """Write the compact binary layout; returns the number of rows"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([sol.times, sol.u]).astype(VALUE_DTYPE)
    with open(path, "wb") as f:
        f.write(np.array([sol.nx, sol.times.size], dtype=HEADER_DTYPE).tobytes())
        f.write(np.ascontiguousarray(table).tobytes(order="C"))
    return int(sol.times.size)


def read_solution_binary(path: Union[str, Path]) -> Tuple[np.ndarray, np.ndarray]:
    """(times, u) from the binary layout"""
    raw = Path(path).read_bytes()
    if len(raw) < 16:
        raise ValueError(f"{path}: truncated header")
    nx, n_times = (int(n) for n in np.frombuffer(raw[:16], dtype=HEADER_DTYPE))
    body = np.frombuffer(raw[16:], dtype=VALUE_DTYPE)
    if body.size != n_times * (nx + 1):
        raise ValueError(f"{path}: expected {n_times * (nx + 1)} values, got {body.size}")
    table = body.reshape(n_times, nx + 1)
    return table[:, 0].copy(), table[:, 1:].copy()


def write_measure_csv(m: KineticMeasure, path: Union[str, Path]) -> int:
    """Rows (t0, t1, v, mass) with the mass integrated over x and the level weight"""
    mass = m.block_level_mass()
    rows = (
        (m.t_edges[b], m.t_edges[b + 1], v, mass[b, l])
        for b in range(mass.shape[0])
        for l, v in enumerate(m.v_levels)
    )
    return write_csv(path, ["t0", "t1", "v", "mass"], rows)
