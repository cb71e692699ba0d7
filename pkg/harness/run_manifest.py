"""
Run manifest: written when a run starts and finalized when it ends
"""
import os
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field

from utils.tables import read_json, write_json

TOOL_VERSION = "0.1.0"
MANIFEST_FILE = "manifest.json"


class InventoryEntry(BaseModel):
    path: str = Field(description="File path relative to the output directory")
    rows: int = Field(ge=0, description="Data rows (CSV), values (paths/solutions) or keys (JSON)")


class RunManifest(BaseModel):
    config: Dict = Field(description="Echo of the validated configuration")
    tool_version: str = TOOL_VERSION
    started_at: str
    finished_at: Optional[str] = None
    wall_clock_s: Optional[float] = None
    workers: int = Field(default=1, ge=1)
    seeds: Dict[str, List[int]] = Field(
        default_factory=dict, description="Per-group realization seeds, in realization order"
    )
    inventory: List[InventoryEntry] = Field(default_factory=list)
    status: Literal["running", "complete", "failed"] = "running"
    error: Optional[str] = None

    def inventory_paths(self) -> List[str]:
        return [entry.path for entry in self.inventory]


class ManifestStore:
    """Write the manifest of one output directory at run start and finalize it at run end"""

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir)
        self.path = self.out_dir / MANIFEST_FILE
        self.manifest: Optional[RunManifest] = None

    def start(self, config: Dict, workers: int) -> RunManifest:
        self.manifest = RunManifest(
            config=config, started_at=datetime.now().isoformat(), workers=workers
        )
        self.save()
        return self.manifest

    def save(self) -> None:
        if self.manifest is None:
            raise ValueError("no manifest to save")
        write_json(self.path, self.manifest.model_dump())

    def finalize(
        self,
        status: Literal["complete", "failed"],
        seeds: Dict[str, List[int]],
        files: Dict[str, int],
        wall_clock_s: float,
        error: Optional[str] = None,
    ) -> RunManifest:
        """Record the outcome; the inventory lists every file in the directory but the manifest"""
        if self.manifest is None:
            raise ValueError("manifest was never started")
        inventory = []
        for rel in sorted(self._listing()):
            # files written outside the experiment's own bookkeeping are listed with 0 rows
            inventory.append(InventoryEntry(path=rel, rows=files.get(rel, 0)))
        self.manifest = self.manifest.model_copy(
            update={
                "status": status,
                "seeds": seeds,
                "inventory": inventory,
                "finished_at": datetime.now().isoformat(),
                "wall_clock_s": wall_clock_s,
                "error": error,
            }
        )
        self.save()
        return self.manifest

    def _listing(self) -> List[str]:
        out = []
        for root, _, names in os.walk(self.out_dir):
            for name in names:
                rel = (Path(root) / name).relative_to(self.out_dir).as_posix()
                if rel != MANIFEST_FILE:
                    out.append(rel)
        return out


def read_manifest(out_dir: Union[str, Path]) -> RunManifest:
    path = Path(out_dir) / MANIFEST_FILE
    if not path.is_file():
        raise FileNotFoundError(f"no manifest in {out_dir}")
    return RunManifest.model_validate(read_json(path))
