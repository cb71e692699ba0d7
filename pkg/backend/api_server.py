"""
Read-only FastAPI server for predicted exponents, presets and finished runs
Run with: python backend/api_server.py
"""
import sys
from pathlib import Path

# Add parent directory to path to import the numerical packages
parent_dir = Path(__file__).parent.parent
sys.path.insert(0, str(parent_dir))

from contextlib import asynccontextmanager
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from harness.config import runs_root, to_ini
from harness.presets import PRESETS, preset
from harness.run_manifest import MANIFEST_FILE, read_manifest
from regularity import (
    InterplayResult,
    predicted_lambda_fbm,
    predicted_lambda_main,
    predicted_s_star,
    interplay_pairs,
)

load_dotenv(override=True)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Lifespan context manager for startup diagnostics"""
    root = runs_root()
    print("[INFO] Starting exponent and run browser API...")
    print(f"[INFO] - Runs directory: {root}")
    if not root.is_dir():
        print("[WARNING] Runs directory does not exist yet; /api/runs will be empty.")
    else:
        print(f"[INFO] - Runs with a manifest: {len(_run_dirs(root))}")
    print(f"[INFO] - Presets: {', '.join(sorted(PRESETS))}")
    print("[OK] API server is ready on http://127.0.0.1:8001")
    yield


app = FastAPI(title="Rough conservation law lab API", lifespan=lifespan)

# Read-only surface; any origin may browse it
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["GET"],
    allow_headers=["*"],
)


class ExponentsResponse(BaseModel):
    lambda_fbm: Optional[float] = Field(default=None, description="1/((ν∨2H)(H+1)+H)")
    one_over_1_plus_2H: Optional[float] = None
    s_star: Optional[float] = Field(default=None, description="(1+η-ι)/(1+η+ι)")
    lambda_main: Optional[float] = Field(default=None, description="Main threshold for (ρ, γ, η, ν)")
    inputs: Dict[str, float]


class RunInfo(BaseModel):
    name: str
    kind: str
    status: str
    started_at: str
    files: int


def _run_dirs(root: Path) -> List[Path]:
    return sorted(d for d in root.iterdir() if d.is_dir() and (d / MANIFEST_FILE).is_file())


@app.get("/")
async def root():
    """Health check endpoint"""
    return {"status": "online", "service": "rough conservation law lab API"}


@app.get("/health")
async def health():
    """Health check endpoint"""
    root_dir = runs_root()
    status = {"status": "healthy", "runs_dir": str(root_dir), "runs_dir_exists": root_dir.is_dir()}
    if root_dir.is_dir():
        status["runs"] = len(_run_dirs(root_dir))
    return status


@app.get("/api/exponents", response_model=ExponentsResponse)
async def exponents(
    hurst: Optional[float] = None,
    nu: float = 1.0,
    eta: Optional[float] = None,
    iota: Optional[float] = None,
    rho: Optional[float] = None,
    gamma: Optional[float] = None,
):
    """Predicted thresholds for whichever parameter sets are complete"""
    inputs = {
        k: v for k, v in
        {"hurst": hurst, "nu": nu, "eta": eta, "iota": iota, "rho": rho, "gamma": gamma}.items()
        if v is not None
    }
    response = ExponentsResponse(inputs=inputs)
    try:
        if hurst is not None:
            response.lambda_fbm = predicted_lambda_fbm(hurst, nu)
            response.one_over_1_plus_2H = 1.0 / (1.0 + 2.0 * hurst)
        if eta is not None and iota is not None:
            response.s_star = predicted_s_star(eta, iota)
        if rho is not None and gamma is not None and eta is not None:
            response.lambda_main = predicted_lambda_main(rho, gamma, eta, nu)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    if response.lambda_fbm is None and response.s_star is None and response.lambda_main is None:
        raise HTTPException(
            status_code=400,
            detail="give hurst, or eta and iota, or rho, gamma and eta",
        )
    return response


@app.get("/api/interplay", response_model=InterplayResult)
async def interplay(h1: float, nu1: float, h2: float):
    """ν₂ matching the threshold of (H₁, ν₁) at H₂"""
    try:
        return interplay_pairs(h1, nu1, h2)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.get("/api/presets/{name}")
async def get_preset(name: str) -> Dict[str, Any]:
    """A named configuration as JSON and as INI text"""
    if name not in PRESETS:
        raise HTTPException(status_code=404, detail=f"unknown preset '{name}'")
    config = preset(name)
    return {"name": name, "config": config.model_dump(), "ini": to_ini(config)}


@app.get("/api/runs", response_model=List[RunInfo])
async def list_runs():
    """Finished or running experiments under the runs directory"""
    root_dir = runs_root()
    if not root_dir.is_dir():
        return []
    runs = []
    for d in _run_dirs(root_dir):
        try:
            manifest = read_manifest(d)
        except (OSError, ValueError) as e:
            print(f"[WARNING] Skipping {d}: {e}")
            continue
        runs.append(RunInfo(
            name=d.name,
            kind=manifest.config.get("harness", {}).get("kind", "unknown"),
            status=manifest.status,
            started_at=manifest.started_at,
            files=len(manifest.inventory),
        ))
    return runs


@app.get("/api/runs/{name}/manifest")
async def run_manifest(name: str) -> Dict[str, Any]:
    """The manifest of one run"""
    if "/" in name or "\\" in name or name in (".", ".."):
        raise HTTPException(status_code=400, detail="run name must be a plain directory name")
    try:
        manifest = read_manifest(runs_root() / name)
    except FileNotFoundError:
        raise HTTPException(status_code=404, detail=f"no run named '{name}'")
    except ValueError as e:
        raise HTTPException(status_code=400, detail=f"unreadable manifest: {e}")
    return manifest.model_dump()


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="127.0.0.1", port=8001)
