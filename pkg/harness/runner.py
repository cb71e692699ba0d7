"""
Experiment runner: realization-level parallel map, coordinator-side writes, manifest
"""
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from rough_paths import derive_seed
from utils.errors import NumericalInvariantError

from .config import ExperimentConfig, output_dir_for, worker_count
from .experiments import EXPERIMENTS, path_groups, run_task
from .run_manifest import ManifestStore, RunManifest


class ExperimentRunner:
    def __init__(
        self,
        config: ExperimentConfig,
        out_dir: Optional[Union[str, Path]] = None,
        workers: Optional[int] = None,
        verbose: bool = True,
    ):
        self.config = config
        self.out_dir = Path(out_dir) if out_dir is not None else output_dir_for(config)
        self.workers = workers if workers is not None else worker_count()
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")
        self.verbose = verbose
        self.experiment = EXPERIMENTS[config.harness.kind]
        self.store = ManifestStore(self.out_dir)

    def log(self, message: str) -> None:
        if self.verbose:
            print(message, flush=True)

    def tasks(self) -> Tuple[List[Tuple], Dict[str, List[int]]]:
        """One task per (group, realization); deterministic paths get a single realization"""
        if self.experiment.realize is None:
            return [], {}
        kind = self.config.harness.kind
        config_dict = self.config.model_dump()
        master = self.config.harness.master_seed
        tasks, seeds = [], {}
        for group in path_groups(self.config):
            size = self.config.harness.ensemble_size if group.stochastic else 1
            group_seeds = [derive_seed(master, i) for i in range(size)]
            seeds[group.label] = group_seeds
            spec_dict = group.spec.model_dump()
            for i, seed in enumerate(group_seeds):
                tasks.append((kind, group.label, spec_dict, config_dict, i, seed))
        return tasks, seeds

    def _map(self, tasks: List[Tuple]) -> List[Dict]:
        if self.workers == 1 or len(tasks) <= 1:
            results = []
            for k, task in enumerate(tasks):
                results.append(run_task(task))
                self.log(f"[INFO] realization {k + 1}/{len(tasks)} done")
            return results
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            results = []
            for k, result in enumerate(executor.map(run_task, tasks)):
                results.append(result)
                self.log(f"[INFO] realization {k + 1}/{len(tasks)} done")
        return results

    def run(self) -> RunManifest:
        """Execute the experiment and return the finalized manifest"""
        kind = self.config.harness.kind
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.store.start(self.config.model_dump(), self.workers)
        self.log(f"[INFO] Running '{kind}' into {self.out_dir}")
        self.log(f"[INFO] - {self.experiment.description}")
        start = time.perf_counter()

        tasks, seeds = self.tasks()
        self.log(f"[INFO] - {len(tasks)} realizations, {self.workers} worker(s)")
        files: Dict[str, int] = {}
        try:
            results = self._map(tasks)
            order = {label: k for k, label in enumerate(seeds)}
            results.sort(key=lambda r: (order[r["row"]["group"]], r["row"]["index"]))
            files = self.experiment.finalize(self.config, results, self.out_dir)
            self._check_entropy(results)
        except Exception as e:
            self.store.finalize("failed", seeds, files, time.perf_counter() - start, error=str(e))
            self.log(f"[ERROR] Run failed: {e}")
            raise

        manifest = self.store.finalize("complete", seeds, files, time.perf_counter() - start)
        self.log(f"[OK] {len(manifest.inventory)} files written in {manifest.wall_clock_s:.1f}s")
        return manifest

    @staticmethod
    def _check_entropy(results: List[Dict]) -> None:
        bad = [r["row"] for r in results if r["row"].get("violations", 0) > 0]
        if bad:
            worst = min(row["min_density"] for row in bad)
            raise NumericalInvariantError(
                "entropy-defect nonnegativity",
                f"{len(bad)} realization(s) with negative production, min density {worst:.3g}",
            )


def run(config: ExperimentConfig, out_dir: Optional[Union[str, Path]] = None, verbose: bool = True) -> RunManifest:
    return ExperimentRunner(config, out_dir=out_dir, verbose=verbose).run()
