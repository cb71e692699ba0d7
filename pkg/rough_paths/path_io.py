"""
Columnar text format for sampled paths

    # kind H d N T seed
    t_0 w_0^1 ... w_0^d
    ...

Absent metadata is written as "-". Weierstrass paths carry their Hölder index in the H
column. Floats use 17 significant digits, so a write/read cycle is lossless.
"""
from pathlib import Path
from typing import Union

import numpy as np

from .sampled_path import SampledPath

MISSING = "-"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_path_header(p: SampledPath) -> str:
    index = p.alpha if p.kind == "weierstrass" else p.hurst
    fields = [
        p.kind,
        MISSING if index is None else _fmt(index),
        str(p.dim),
        str(p.n_steps),
        _fmt(p.horizon),
        MISSING if p.seed is None else str(p.seed),
    ]
    return "# " + " ".join(fields)


def write_path(p: SampledPath, path: Union[str, Path]) -> Path:
    """Write a path to disk and return the file path"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    times = p.times
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_path_header(p) + "\n")
        for k in range(p.n_steps + 1):
            row = [_fmt(times[k])] + [_fmt(v) for v in p.values[k]]
            f.write(" ".join(row) + "\n")
    return path


def read_path(path: Union[str, Path]) -> SampledPath:
    """Read a path written by write_path"""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if not header.startswith("#"):
            raise ValueError(f"{path}: missing '# kind H d N T seed' header")
        parts = header.lstrip("#").split()
        if len(parts) != 6:
            raise ValueError(f"{path}: header needs 6 fields, got {len(parts)}")
        kind, index, dim, n_steps, horizon, seed = parts
        data = np.loadtxt(f, ndmin=2)

    dim, n_steps = int(dim), int(n_steps)
    if data.shape != (n_steps + 1, dim + 1):
        raise ValueError(
            f"{path}: expected {n_steps + 1} rows of {dim + 1} columns, got {data.shape}"
        )
    index_value = None if index == MISSING else float(index)
    return SampledPath(
        dim=dim,
        horizon=float(horizon),
        n_steps=n_steps,
        values=data[:, 1:],
        kind=kind,
        seed=None if seed == MISSING else int(seed),
        hurst=None if kind == "weierstrass" else index_value,
        alpha=index_value if kind == "weierstrass" else None,
    )
