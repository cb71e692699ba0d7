"""
Static SVG line plots rendered from the run's own tables
"""
import io
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams.update(
    {
        "font.family": "DejaVu Sans",
        "axes.unicode_minus": False,
        # fixed element ids and text kept as text, so reruns write identical bytes
        "svg.hashsalt": "roughreg",
        "svg.fonttype": "none",
    }
)
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGSIZE = (6.4, 4.2)

Series = Tuple[str, Sequence[float], Sequence[float]]


def _finite_series(series: List[Series]) -> List[Tuple[str, np.ndarray, np.ndarray]]:
    cleaned = []
    for label, xs, ys in series:
        x, y = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError(f"series '{label}' needs x and y of equal 1-D shape")
        keep = np.isfinite(x) & np.isfinite(y)
        cleaned.append((label, x[keep], y[keep]))
    if not any(x.size for _, x, _ in cleaned):
        raise ValueError("no finite points to plot")
    return cleaned


def line_plot_svg(series: List[Series], title: str, x_label: str, y_label: str) -> str:
    """One marked line per series (SVG group id series_<k>), shared axes and a legend"""
    if not series:
        raise ValueError("nothing to plot")
    cleaned = _finite_series(series)

    fig, ax = plt.subplots(figsize=FIGSIZE, constrained_layout=True)
    try:
        for k, (label, x, y) in enumerate(cleaned):
            ax.plot(x, y, marker="o", markersize=3, label=label, gid=f"series_{k}")
        ax.set_title(title)
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best", fontsize=8)
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return buffer.getvalue()


def write_line_plot(
    path: Union[str, Path], series: List[Series], title: str, x_label: str, y_label: str
) -> int:
    """Write the SVG; returns the number of plotted points"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    svg = line_plot_svg(series, title, x_label, y_label)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(svg)
    return int(sum(len(xs) for _, xs, _ in series))
