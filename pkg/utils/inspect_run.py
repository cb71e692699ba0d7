"""
Utility script to inspect the outputs of an experiment run
"""
import sys
from pathlib import Path

# Add parent directory to path
parent_dir = Path(__file__).parent.parent
sys.path.insert(0, str(parent_dir))

from harness.run_manifest import read_manifest
from utils.tables import read_csv, read_json


def inspect_run(out_dir: str, preview_rows: int = 5) -> int:
    """Print manifest, inventory and summary of an output directory"""
    out = Path(out_dir)
    print("=" * 60)
    print(f"Run Inspector: {out}")
    print("=" * 60)
    print()

    try:
        manifest = read_manifest(out)
    except FileNotFoundError as e:
        print(f"[ERROR] {e}")
        return 1

    config = manifest.config
    print("Manifest:")
    print(f"   Experiment: {config['harness']['kind']}")
    print(f"   Status: {manifest.status}")
    print(f"   Tool version: {manifest.tool_version}")
    print(f"   Started: {manifest.started_at}")
    print(f"   Finished: {manifest.finished_at or '-'}")
    if manifest.wall_clock_s is not None:
        print(f"   Wall clock: {manifest.wall_clock_s:.1f}s with {manifest.workers} worker(s)")
    if manifest.error:
        print(f"   [ERROR] {manifest.error}")
    for group, seeds in manifest.seeds.items():
        print(f"   Group {group}: {len(seeds)} realization(s)")
    print()

    print(f"Inventory ({len(manifest.inventory)} files):")
    for entry in manifest.inventory:
        present = (out / entry.path).exists()
        flag = "" if present else "  [WARNING] missing"
        print(f"   {entry.path:<40} {entry.rows:>8} rows{flag}")
    print()

    summary_path = out / "summary.json"
    if summary_path.exists():
        print("Summary:")
        for key, value in read_json(summary_path).items():
            print(f"   {key}: {value}")
        print()

    for entry in manifest.inventory:
        if entry.path.endswith(".csv") and "/" not in entry.path:
            rows = read_csv(out / entry.path)
            print(f"Preview of {entry.path}:")
            for row in rows[:preview_rows]:
                print(f"   {dict(row)}")
            print()
            break
    return 0


if __name__ == "__main__":
    if len(sys.argv) < 2:
        print("Usage: python utils/inspect_run.py <output_dir>")
        sys.exit(1)
    sys.exit(inspect_run(sys.argv[1]))
