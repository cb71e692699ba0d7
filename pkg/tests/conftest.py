"""
Shared fixtures for the test suite
"""
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from rough_paths import generate_deterministic, generate_fbm
from solver import make_flux


@pytest.fixture
def burgers():
    return make_flux([0.0, 0.0, 0.5])


@pytest.fixture
def linear_path():
    return generate_deterministic("linear", 256, 1.0)


@pytest.fixture
def fbm_path():
    return generate_fbm(0.5, 1, 1024, 1.0, seed=7)


@pytest.fixture
def step_field():
    """Indicator of [0, 1/2) on 1024 cells"""
    u = np.zeros(1024)
    u[:512] = 1.0
    return u


@pytest.fixture
def quiet_env(monkeypatch, tmp_path):
    """Serial runs writing under a temporary output root"""
    monkeypatch.setenv("ROUGHREG_WORKERS", "1")
    monkeypatch.setenv("ROUGHREG_OUTPUT_DIR", str(tmp_path / "outputs"))
    monkeypatch.setenv("ROUGHREG_RUNS_DIR", str(tmp_path / "outputs"))
    return tmp_path
