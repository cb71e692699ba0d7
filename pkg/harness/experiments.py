"""
Experiment registry: per-realization work and the coordinator-side output writers

A realization function runs inside a worker process and returns plain rows plus the
objects the coordinator needs for files; finalize functions write every output file
and return {relative path: row count} for the manifest inventory.
"""
import math
from pathlib import Path
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from irregularity import (
    check_interpolation,
    estimate_iota,
    estimate_rho_gamma,
    gamma_sweep,
    predicted_iota_from_rho,
    write_iota_csv,
    write_irregularity_report,
    write_scan_csv,
    write_sup_profile_csv,
)
from kinetic import default_catalog, weak_form_residual, write_weak_form_csv
from regularity import (
    besov_exponent,
    exponents_table,
    gagliardo_seminorm,
    l1_modulus,
    predicted_lambda_fbm,
    theorem_bound_terms,
    time_averaged_modulus,
)
from rough_paths import (
    SampledPath,
    derive_seed,
    generate_brownian,
    generate_deterministic,
    generate_fbm,
    generate_weierstrass,
    holder_exponent,
    scale_path,
    sum_paths,
    write_path,
)
from solver import (
    build_initial_data,
    default_levels,
    entropy_defect,
    make_flux,
    solve_rough,
    write_measure_csv,
    write_solution_binary,
    write_solution_csv,
)
from utils.tables import write_csv, write_json

from .config import ExperimentConfig, PathSpec
from .svg_plot import write_line_plot

FLAT_TOLERANCE = 0.05
LOWER_BOUND_SLACK = 0.1


class PathGroup(NamedTuple):
    """One ensemble: a label used in file names, the path spec, and whether seeds matter"""

    label: str
    spec: PathSpec
    stochastic: bool


def group_label(spec: PathSpec) -> str:
    label = f"fbm_H{spec.hurst:g}" if spec.kind == "fbm" else spec.kind
    if spec.drift:
        label += f"_drift{spec.drift:g}"
    if spec.weierstrass_amplitude and spec.kind != "weierstrass":
        label += f"_g{spec.weierstrass_amplitude:g}"
    return label


def path_groups(config: ExperimentConfig) -> List[PathGroup]:
    """The H sweep (or the single path spec), preceded by a linear-path group when paired"""
    spec = config.path
    if spec.hursts:
        specs = [spec.model_copy(update={"hurst": h, "hursts": []}) for h in spec.hursts]
    else:
        specs = [spec]
    if config.harness.paired_deterministic:
        specs.insert(0, spec.model_copy(update={"kind": "linear", "hursts": []}))
    groups = []
    for s in specs:
        stochastic = s.kind in ("fbm", "brownian")
        groups.append(PathGroup(group_label(s), s, stochastic))
    labels = [g.label for g in groups]
    if len(set(labels)) != len(labels):
        raise ValueError(f"path groups are not distinct: {labels}")
    return groups


def build_path(spec: PathSpec, seed: int) -> SampledPath:
    """Base path of the group's kind, plus drift·t and amplitude·g when requested"""
    n, horizon, dim = spec.n_steps, spec.horizon, spec.dim
    if spec.kind == "fbm":
        p = generate_fbm(spec.hurst, dim, n, horizon, seed)
    elif spec.kind == "brownian":
        p = generate_brownian(dim, n, horizon, seed)
    elif spec.kind == "linear":
        p = generate_deterministic("linear", n, horizon, dim=dim)
    else:
        p = generate_weierstrass(spec.weierstrass_alpha, n, horizon, dim=dim)
    if spec.drift:
        drift = scale_path(generate_deterministic("linear", n, horizon, dim=dim), spec.drift)
        p = sum_paths(drift, p)
    if spec.weierstrass_amplitude and spec.kind != "weierstrass":
        g = generate_weierstrass(spec.weierstrass_alpha, n, horizon, dim=dim)
        p = sum_paths(p, scale_path(g, spec.weierstrass_amplitude))
    return p


def generate_ensemble(spec: PathSpec, size: int, master_seed: int) -> List[SampledPath]:
    """size paths with seeds derive_seed(master_seed, i)"""
    if size < 1:
        raise ValueError(f"ensemble size must be positive, got {size}")
    return [build_path(spec, derive_seed(master_seed, i)) for i in range(size)]


def _holder_levels(p: SampledPath) -> int:
    return max(3, min(8, int(math.floor(math.log2(p.n_steps)))))


def _eta_for_bound(p: SampledPath) -> float:
    est = holder_exponent(p, _holder_levels(p))
    return float(min(1.0, max(0.01, est.eta_hat)))


def _solve(config: ExperimentConfig, p: SampledPath, extra_times: Sequence[float] = ()):
    s = config.solver
    f = make_flux(s.flux_coeffs)
    u0 = build_initial_data(s.u0, s.nx, **s.initial_params())
    if s.output_times:
        times = list(s.output_times)
    else:
        times = list(np.linspace(0.0, p.horizon, s.n_outputs))
    # snapped to the path grid
    times = sorted({p.index_of(t) * p.dt for t in list(times) + list(extra_times)})
    sol = solve_rough(f, p, u0, s.nx, cfl=s.cfl, output_times=times, scheme=s.scheme)
    return f, sol


def _entropy(config: ExperimentConfig, f, sol, p: SampledPath):
    u_lo = float(min(sol.u0.min(), sol.u.min()))
    u_hi = float(max(sol.u0.max(), sol.u.max()))
    levels = default_levels(u_lo, u_hi, config.kinetic.n_levels)
    return entropy_defect(sol, f, p, levels, config.kinetic.max_blocks)


def _median(values: Sequence[float]) -> float:
    finite = [v for v in values if v is not None and np.isfinite(v)]
    return float(np.median(finite)) if finite else float("nan")


def _write_rows(out_dir: Path, rel: str, rows: List[Dict[str, Any]], files: Dict[str, int]) -> None:
    if not rows:
        return
    header = list(rows[0])
    files[rel] = write_csv(out_dir / rel, header, ([r.get(k, "") for k in header] for r in rows))


def _by_group(results: List[Dict]) -> Dict[str, List[Dict]]:
    grouped: Dict[str, List[Dict]] = {}
    for r in results:
        grouped.setdefault(r["row"]["group"], []).append(r)
    return grouped


def lower_bound_consistent(median_lambda: float, predicted: float) -> bool:
    """Median λ̂ no more than the slack below the predicted threshold"""
    return bool(median_lambda >= predicted - LOWER_BOUND_SLACK)


def non_increasing_or_flat(medians: Sequence[float]) -> bool:
    """Medians ordered by increasing H either never increase or stay within the flat band"""
    values = np.asarray(medians, dtype=float)
    if values.size < 2:
        return True
    return bool(np.all(np.diff(values) <= 0.0) or np.ptp(values) <= FLAT_TOLERANCE)


def _base_row(group: PathGroup, index: int, seed: int, p: SampledPath) -> Dict[str, Any]:
    return {
        "group": group.label,
        "hurst": group.spec.hurst if group.spec.kind == "fbm" else float("nan"),
        "index": index,
        "seed": seed,
        "path": p.ref,
    }


def _hurst_series(groups: Dict[str, List[Dict]], column: str) -> Tuple[List[float], List[float]]:
    pairs = []
    for rows in groups.values():
        h = rows[0]["row"]["hurst"]
        if np.isfinite(h):
            pairs.append((h, _median([r["row"][column] for r in rows])))
    pairs.sort()
    return [h for h, _ in pairs], [v for _, v in pairs]


def realize_paths(config: ExperimentConfig, group: PathGroup, index: int, seed: int) -> Dict:
    p = build_path(group.spec, seed)
    est = holder_exponent(p, _holder_levels(p))
    row = _base_row(group, index, seed, p)
    row.update({"eta_hat": est.eta_hat, "fit_quality": est.fit_quality, "degenerate": est.degenerate})
    return {"row": row, "path": p}


def finalize_paths(config: ExperimentConfig, results: List[Dict], out_dir: Path) -> Dict[str, int]:
    files: Dict[str, int] = {}
    for r in results:
        p = r["path"]
        rel = f"paths/{r['row']['group']}_{r['row']['index']:04d}.txt"
        write_path(p, out_dir / rel)
        files[rel] = p.n_steps + 1
    _write_rows(out_dir, "paths.csv", [r["row"] for r in results], files)
    summary = {
        g: {"median_eta_hat": _median([r["row"]["eta_hat"] for r in rows]), "count": len(rows)}
        for g, rows in _by_group(results).items()
    }
    files["summary.json"] = write_json(out_dir / "summary.json", summary)
    return files


def realize_irregularity(config: ExperimentConfig, group: PathGroup, index: int, seed: int) -> Dict:
    spec = config.irregularity
    p = build_path(group.spec, seed)
    report = estimate_rho_gamma(p, a_max=spec.a_max, n_a=spec.n_a, gamma=spec.gamma, max_levels=spec.max_levels)
    checks = [check_interpolation(report, k) for k in spec.kappas]
    row = _base_row(group, index, seed, p)
    row.update({
        "rho_hat": report.rho_hat,
        "gamma": report.gamma_used,
        "norm_estimate": report.norm_estimate,
        "fit_quality": report.fit_quality,
        "degenerate": report.degenerate,
        "interpolation_passed": all(c.passed for c in checks),
    })
    interp_rows = [
        {"group": group.label, "index": index, "kappa": c.kappa, "rho": c.rho, "gamma": c.gamma,
         "lhs": c.lhs, "rhs": c.rhs, "margin": c.margin, "passed": c.passed}
        for c in checks
    ]
    sweep_rows = [
        {"group": group.label, "index": index, "gamma": rep.gamma_used, "rho_hat": rep.rho_hat,
         "norm_estimate": rep.norm_estimate, "fit_quality": rep.fit_quality}
        for rep in gamma_sweep(p, spec.gammas, a_max=spec.a_max, n_a=spec.n_a)
    ]
    return {
        "row": row,
        "interpolation": interp_rows,
        "sweep": sweep_rows,
        "report": report if index == 0 else None,
    }


def finalize_irregularity(config: ExperimentConfig, results: List[Dict], out_dir: Path) -> Dict[str, int]:
    files: Dict[str, int] = {}
    _write_rows(out_dir, "irregularity.csv", [r["row"] for r in results], files)
    _write_rows(out_dir, "interpolation.csv", [x for r in results for x in r["interpolation"]], files)
    _write_rows(out_dir, "gamma_sweep.csv", [x for r in results for x in r["sweep"]], files)
    grouped = _by_group(results)
    summary = {}
    for g, rows in grouped.items():
        first = rows[0]["report"]
        if first is not None:
            files[f"scan_{g}.csv"] = write_scan_csv(first.scan, out_dir / f"scan_{g}.csv")
            files[f"report_{g}.json"] = write_irregularity_report(first, out_dir / f"report_{g}.json")
            files[f"sup_profile_{g}.csv"] = write_sup_profile_csv(first, out_dir / f"sup_profile_{g}.csv")
        checks = [x for r in rows for x in r["interpolation"]]
        summary[g] = {
            "median_rho_hat": _median([r["row"]["rho_hat"] for r in rows]),
            "gamma": config.irregularity.gamma,
            "interpolation_pass_rate": (
                sum(c["passed"] for c in checks) / len(checks) if checks else float("nan")
            ),
            "count": len(rows),
        }
    files["summary.json"] = write_json(out_dir / "summary.json", summary)
    hs, rhos = _hurst_series(grouped, "rho_hat")
    if config.harness.plots and len(hs) >= 2:
        grid = np.linspace(min(hs), max(hs), 50)
        files["rho_vs_H.svg"] = write_line_plot(
            out_dir / "rho_vs_H.svg",
            [("median rho_hat", hs, rhos), ("1/(2H)", grid, 1.0 / (2.0 * grid))],
            "Irregularity exponent against H", "H", "rho",
        )
    return files


def realize_iota(config: ExperimentConfig, group: PathGroup, index: int, seed: int) -> Dict:
    spec = config.iota
    p = build_path(group.spec, seed)
    est = estimate_iota(
        p, alphas=spec.alphas, lambda_min=spec.lambda_min,
        lambda_max=spec.lambda_max, n_lambda=spec.n_lambda,
    )
    row = _base_row(group, index, seed, p)
    row.update({
        "iota_hat": est.iota_hat,
        "constant_C": est.constant_C,
        "zero_fraction": est.zero_fraction,
        "flagged": est.flagged,
    })
    if spec.compare_rho:
        irr = config.irregularity
        rho = estimate_rho_gamma(p, a_max=irr.a_max, n_a=irr.n_a, gamma=irr.gamma).rho_hat
        row["rho_hat"] = rho
        row["iota_from_rho"] = predicted_iota_from_rho(rho) if rho > 0 else float("nan")
    return {"row": row, "estimate": est if index == 0 else None}


def finalize_iota(config: ExperimentConfig, results: List[Dict], out_dir: Path) -> Dict[str, int]:
    files: Dict[str, int] = {}
    _write_rows(out_dir, "iota.csv", [r["row"] for r in results], files)
    grouped = _by_group(results)
    summary = {}
    for g, rows in grouped.items():
        if rows[0]["estimate"] is not None:
            rel = f"iota_curve_{g}.csv"
            files[rel] = write_iota_csv(rows[0]["estimate"], out_dir / rel)
        median = _median([r["row"]["iota_hat"] for r in rows])
        hurst = rows[0]["row"]["hurst"]
        entry = {
            "median_iota_hat": median,
            "flagged": sum(bool(r["row"]["flagged"]) for r in rows),
            "count": len(rows),
        }
        if np.isfinite(hurst):
            entry["abs_error_vs_H"] = abs(median - hurst)
        if config.iota.compare_rho:
            entry["median_iota_from_rho"] = _median([r["row"]["iota_from_rho"] for r in rows])
        summary[g] = entry
    files["summary.json"] = write_json(out_dir / "summary.json", summary)
    hs, iotas = _hurst_series(grouped, "iota_hat")
    if config.harness.plots and len(hs) >= 2:
        files["iota_vs_H.svg"] = write_line_plot(
            out_dir / "iota_vs_H.svg",
            [("median iota_hat", hs, iotas), ("H", hs, hs)],
            "Scaling index against H", "H", "iota",
        )
    return files


def realize_solve(config: ExperimentConfig, group: PathGroup, index: int, seed: int) -> Dict:
    p = build_path(group.spec, seed)
    f, sol = _solve(config, p)
    masses = sol.masses()
    row = _base_row(group, index, seed, p)
    row.update({
        "substeps": sol.substeps,
        "mass_drift": float(np.max(np.abs(masses - masses[0]))),
        "u_min": float(sol.u.min()),
        "u_max": float(sol.u.max()),
    })
    m = None
    if config.kinetic.check_entropy:
        m = _entropy(config, f, sol, p)
        bound = theorem_bound_terms(sol, m, p, _eta_for_bound(p))
        row.update({
            "total_variation": m.total_variation,
            "weighted_tv": m.weighted_tv,
            "violations": m.violations,
            "min_density": m.min_density,
            "u0_l1": bound.u0_l1,
            "u_l1_tx": bound.u_l1_tx,
            "eta": bound.eta,
            "holder_seminorm": bound.holder_seminorm,
            "measure_term": bound.measure_term,
        })
    keep = index == 0
    return {"row": row, "solution": sol if keep else None, "measure": m if keep else None}


def finalize_solve(config: ExperimentConfig, results: List[Dict], out_dir: Path) -> Dict[str, int]:
    files: Dict[str, int] = {}
    _write_rows(out_dir, "solve.csv", [r["row"] for r in results], files)
    for g, rows in _by_group(results).items():
        sol, m = rows[0]["solution"], rows[0]["measure"]
        if sol is not None:
            files[f"solution_{g}.csv"] = write_solution_csv(sol, out_dir / f"solution_{g}.csv")
            files[f"solution_{g}.bin"] = write_solution_binary(sol, out_dir / f"solution_{g}.bin")
        if m is not None:
            files[f"measure_{g}.csv"] = write_measure_csv(m, out_dir / f"measure_{g}.csv")
    summary = {
        g: {
            "max_mass_drift": max(r["row"]["mass_drift"] for r in rows),
            "violations": sum(r["row"].get("violations", 0) for r in rows),
            "count": len(rows),
        }
        for g, rows in _by_group(results).items()
    }
    files["summary.json"] = write_json(out_dir / "summary.json", summary)
    return files


def realize_regularity(config: ExperimentConfig, group: PathGroup, index: int, seed: int) -> Dict:
    spec = config.regularity
    p = build_path(group.spec, seed)
    f, sol = _solve(config, p)
    curve = time_averaged_modulus(sol, spec.n_levels)
    report = besov_exponent(curve, spec.fit_lo, spec.fit_hi)
    final = besov_exponent(l1_modulus(sol.u[-1], spec.n_levels), spec.fit_lo, spec.fit_hi)
    predicted = (
        predicted_lambda_fbm(group.spec.hurst, spec.nu) if group.spec.kind == "fbm" else float("nan")
    )
    row = _base_row(group, index, seed, p)
    row.update({
        "lambda_hat": report.lambda_hat,
        "fit_quality": report.fit_quality,
        "smooth": report.smooth,
        "lambda_hat_final": final.lambda_hat,
        "predicted_lambda": predicted,
    })
    for lam in spec.lambdas:
        row[f"gagliardo_{lam:g}"] = gagliardo_seminorm(sol.u[-1], lam)
    if config.kinetic.check_entropy:
        m = _entropy(config, f, sol, p)
        row["violations"] = m.violations
        row["min_density"] = m.min_density
    return {"row": row, "curve": curve if index == 0 else None}


def finalize_regularity(config: ExperimentConfig, results: List[Dict], out_dir: Path) -> Dict[str, int]:
    files: Dict[str, int] = {}
    _write_rows(out_dir, "regularity.csv", [r["row"] for r in results], files)
    grouped = _by_group(results)
    summary: Dict[str, Any] = {"groups": {}}
    for g, rows in grouped.items():
        curve = rows[0]["curve"]
        if curve is not None:
            rel = f"modulus_{g}.csv"
            files[rel] = write_csv(out_dir / rel, ["h", "omega"], zip(curve.lags, curve.omega))
        median = _median([r["row"]["lambda_hat"] for r in rows])
        predicted = rows[0]["row"]["predicted_lambda"]
        entry = {"median_lambda_hat": median, "predicted_lambda": predicted, "count": len(rows)}
        if np.isfinite(predicted):
            entry["lower_bound_consistent"] = lower_bound_consistent(median, predicted)
        summary["groups"][g] = entry
    hs, medians = _hurst_series(grouped, "lambda_hat")
    if len(hs) >= 2:
        summary["trend_non_increasing_or_flat"] = non_increasing_or_flat(medians)
    files["summary.json"] = write_json(out_dir / "summary.json", summary)
    if config.harness.plots and hs:
        grid = np.linspace(max(0.05, min(hs) - 0.05), min(0.95, max(hs) + 0.05), 50)
        series = [
            ("median lambda_hat", hs, medians),
            ("predicted", grid, [predicted_lambda_fbm(h, config.regularity.nu) for h in grid]),
        ]
        if "linear" in grouped:
            det = _median([r["row"]["lambda_hat"] for r in grouped["linear"]])
            series.append(("linear path", [grid[0], grid[-1]], [det, det]))
        files["lambda_vs_H.svg"] = write_line_plot(
            out_dir / "lambda_vs_H.svg", series,
            "Time-averaged regularity against H", "H", "lambda",
        )
    return files


def realize_weakform(config: ExperimentConfig, group: PathGroup, index: int, seed: int) -> Dict:
    p = build_path(group.spec, seed)
    t_eval = config.kinetic.t_eval if config.kinetic.t_eval is not None else p.horizon
    t_eval = p.index_of(t_eval) * p.dt
    f, sol = _solve(config, p, extra_times=(t_eval,))
    m = _entropy(config, f, sol, p)
    catalog = default_catalog(float(m.v_levels[0]), float(m.v_levels[-1]))
    report = weak_form_residual(sol, m, p, f, t_eval, catalog)
    with_m, bare = report.max_residual, report.max_residual_without_measure
    row = _base_row(group, index, seed, p)
    row.update({
        "t_eval": t_eval,
        "max_residual": with_m,
        "max_residual_without_measure": bare,
        "reduction": bare / with_m if with_m > 0 else float("inf"),
        "truncation_fraction": report.truncation_fraction,
        "violations": m.violations,
    })
    return {"row": row, "report": report if index == 0 else None}


def finalize_weakform(config: ExperimentConfig, results: List[Dict], out_dir: Path) -> Dict[str, int]:
    files: Dict[str, int] = {}
    _write_rows(out_dir, "weakform.csv", [r["row"] for r in results], files)
    summary = {}
    for g, rows in _by_group(results).items():
        if rows[0]["report"] is not None:
            rel = f"weak_form_{g}.csv"
            files[rel] = write_weak_form_csv(rows[0]["report"], out_dir / rel)
        summary[g] = {
            "median_reduction": _median([r["row"]["reduction"] for r in rows]),
            "max_residual": max(r["row"]["max_residual"] for r in rows),
            "count": len(rows),
        }
    files["summary.json"] = write_json(out_dir / "summary.json", summary)
    return files


def finalize_exponents(config: ExperimentConfig, results: List[Dict], out_dir: Path) -> Dict[str, int]:
    files: Dict[str, int] = {}
    rows = exponents_table(config.regularity.table_hursts, config.regularity.nu)
    _write_rows(out_dir, "exponents.csv", rows, files)
    files["summary.json"] = write_json(
        out_dir / "summary.json", {"nu": config.regularity.nu, "rows": len(rows)}
    )
    if config.harness.plots and len(rows) >= 2:
        hs = [r["H"] for r in rows]
        files["exponents.svg"] = write_line_plot(
            out_dir / "exponents.svg",
            [("lambda_fbm", hs, [r["lambda_fbm"] for r in rows]),
             ("1/(1+2H)", hs, [r["one_over_1_plus_2H"] for r in rows]),
             ("s_star", hs, [r["s_star"] for r in rows])],
            "Predicted regularity thresholds", "H", "threshold",
        )
    return files


class Experiment(NamedTuple):
    description: str
    realize: Optional[Callable[[ExperimentConfig, PathGroup, int, int], Dict]]
    finalize: Callable[[ExperimentConfig, List[Dict], Path], Dict[str, int]]


EXPERIMENTS: Dict[str, Experiment] = {
    "paths": Experiment("Path ensembles with Hölder estimates", realize_paths, finalize_paths),
    "irregularity": Experiment(
        "(rho, gamma)-irregularity, interpolation checks and gamma sweeps",
        realize_irregularity, finalize_irregularity,
    ),
    "iota": Experiment("Scaling index estimates", realize_iota, finalize_iota),
    "solve": Experiment(
        "Rough-flux solves with entropy defect and bound terms", realize_solve, finalize_solve
    ),
    "regularity-sweep": Experiment(
        "Time-averaged Besov exponent of solutions against the prediction",
        realize_regularity, finalize_regularity,
    ),
    "exponents": Experiment("Predicted exponent table", None, finalize_exponents),
    "weakform": Experiment(
        "Transported weak-form residuals with and without the entropy defect",
        realize_weakform, finalize_weakform,
    ),
}


def run_task(task: Tuple[str, str, Dict, Dict, int, int]) -> Dict:
    """Worker entry point: (kind, label, path spec, config, index, seed) -> realization result"""
    kind, label, spec_dict, config_dict, index, seed = task
    config = ExperimentConfig.model_validate(config_dict)
    spec = PathSpec.model_validate(spec_dict)
    group = PathGroup(label, spec, spec.kind in ("fbm", "brownian"))
    return EXPERIMENTS[kind].realize(config, group, index, seed)
