"""Verify that the environment can run experiments and the API server"""
import os
import re
import sys
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT))

# Distribution names whose import name differs
IMPORT_NAMES = {'python-dotenv': 'dotenv'}


def check_python_version():
    """Check if Python version is 3.9+"""
    if sys.version_info < (3, 9):
        print(f"[ERROR] Python 3.9 or higher is required, found {sys.version.split()[0]}")
        return False
    print(f"[OK] Python version: {sys.version.split()[0]}")
    return True


def required_packages():
    """Distribution names listed in requirements.txt, extras stripped"""
    lines = (ROOT / 'requirements.txt').read_text().splitlines()
    names = [re.split(r'[\[<>=~ ]', line.strip())[0] for line in lines]
    return [n for n in names if n and not n.startswith('#')]


def check_dependencies():
    missing = []
    for package in required_packages():
        import_name = IMPORT_NAMES.get(package, package.replace('-', '_'))
        try:
            module = __import__(import_name)
        except ImportError:
            missing.append(package)
            continue
        print(f"[OK] {package} {getattr(module, '__version__', '')}".rstrip())

    if missing:
        print(f"[ERROR] Missing packages: {', '.join(missing)}")
        print("Install them with: pip install -r requirements.txt")
        return False
    return True


def check_numba():
    """Compile a small kernel; a broken LLVM install only shows up here"""
    try:
        import numpy as np
        from numba import njit

        @njit
        def _cumsum(x):
            out = np.empty_like(x)
            acc = 0.0
            for i in range(x.size):
                acc += x[i]
                out[i] = acc
            return out

        ok = _cumsum(np.ones(4))[-1] == 4.0
    except Exception as e:
        print(f"[ERROR] numba could not compile a kernel: {e}")
        return False
    print("[OK] numba kernels compile" if ok else "[ERROR] numba kernel returned a wrong value")
    return bool(ok)


def check_presets():
    """Every named configuration must validate"""
    from harness.presets import PRESETS, preset
    from utils.errors import ConfigError

    bad = []
    for name in PRESETS:
        try:
            preset(name)
        except ConfigError as e:
            bad.append(f"{name} ({e})")
    if bad:
        print(f"[ERROR] Invalid presets: {'; '.join(bad)}")
        return False
    print(f"[OK] {len(PRESETS)} presets validate")
    return True


def check_environment():
    """Report the run settings read from the environment or .env"""
    env_path = ROOT / '.env'
    if env_path.exists():
        from dotenv import load_dotenv
        load_dotenv(env_path, override=True)
        print(f"[OK] Loaded {env_path}")
    else:
        print("[INFO] No .env file; using process environment and defaults")

    workers = os.getenv("ROUGHREG_WORKERS")
    if workers is not None and not (workers.isdigit() and int(workers) >= 1):
        print(f"[ERROR] ROUGHREG_WORKERS must be a positive integer, got '{workers}'")
        return False
    print(f"[INFO] - ROUGHREG_WORKERS: {workers or f'unset (default {os.cpu_count()})'}")

    out_root = Path(os.getenv("ROUGHREG_OUTPUT_DIR", "./outputs"))
    writable_dir = out_root if out_root.exists() else out_root.parent
    if not os.access(writable_dir, os.W_OK):
        print(f"[ERROR] Output root {out_root} is not writable")
        return False
    print(f"[INFO] - ROUGHREG_OUTPUT_DIR: {out_root}")
    print(f"[INFO] - ROUGHREG_RUNS_DIR: {os.getenv('ROUGHREG_RUNS_DIR') or 'unset (uses output root)'}")
    return True


def main():
    print("=" * 50)
    print("RoughReg Setup Verification")
    print("=" * 50)

    checks = [
        ("Python Version", check_python_version),
        ("Dependencies", check_dependencies),
        ("Numba", check_numba),
        ("Presets", check_presets),
        ("Environment", check_environment),
    ]
    failed = []
    for name, check_func in checks:
        print(f"\nChecking {name}...")
        if not check_func():
            failed.append(name)

    print("\n" + "=" * 50)
    if failed:
        print(f"[ERROR] Failed checks: {', '.join(failed)}")
        return 1
    print("[OK] Ready to run experiments.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
