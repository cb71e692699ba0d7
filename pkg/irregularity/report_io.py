"""
CSV/JSON output for oscillatory scans, irregularity reports and ι estimates
"""
from pathlib import Path
from typing import Dict, Optional, Union

from utils.tables import write_csv, write_json

from .models import IotaEstimate, IrregularityReport, OscillatoryScan


def write_scan_csv(scan: OscillatoryScan, path: Union[str, Path]) -> int:
    """One row per (a, s, t) cell"""
    rows = (
        (a, s, t, scan.magnitudes[k, m])
        for k, a in enumerate(scan.a_grid)
        for m, (s, t) in enumerate(scan.window_pairs)
    )
    return write_csv(path, ["a", "s", "t", "abs_phi"], rows)


def irregularity_summary(report: IrregularityReport) -> Dict:
    return {
        "rho_hat": report.rho_hat,
        "gamma": report.gamma_used,
        "norm_estimate": report.norm_estimate,
        "fit_quality": report.fit_quality,
        "degenerate": report.degenerate,
        "n_frequencies": int(report.scan.a_grid.size),
        "n_windows": int(report.scan.window_pairs.shape[0]),
        "a_max": float(report.scan.a_grid[-1]),
    }


def write_irregularity_report(report: IrregularityReport, path: Union[str, Path]) -> int:
    return write_json(path, irregularity_summary(report))


def write_sup_profile_csv(report: IrregularityReport, path: Union[str, Path]) -> int:
    """Rows (a, D(a)) of the window-supremum profile"""
    return write_csv(path, ["a", "sup_ratio"], zip(report.scan.a_grid, report.sup_profile))


def iota_summary(estimate: IotaEstimate, rho_hat: Optional[float] = None) -> Dict:
    summary = {
        "iota_hat": estimate.iota_hat,
        "constant_C": estimate.constant_C,
        "zero_fraction": estimate.zero_fraction,
        "flagged": estimate.flagged,
        "per_alpha": [
            {"alpha": a, "slope": s, "fit_quality": q, "iota": i}
            for (a, s, q), i in zip(estimate.per_alpha, estimate.per_alpha_iota)
        ],
        "lambda_min": float(estimate.lambda_grid[0]),
        "lambda_max": float(estimate.lambda_grid[-1]),
    }
    if rho_hat is not None and rho_hat > 0:
        # diagnostic only: both estimators carry their own bias
        summary["iota_from_rho"] = 1.0 / (2.0 * rho_hat)
    return summary


def write_iota_csv(estimate: IotaEstimate, path: Union[str, Path]) -> int:
    """One row per (α, λ) cell"""
    rows = (
        (alpha, lam, estimate.integrals[k, m])
        for k, (alpha, _, _) in enumerate(estimate.per_alpha)
        for m, lam in enumerate(estimate.lambda_grid)
    )
    return write_csv(path, ["alpha", "lambda", "integral"], rows)
