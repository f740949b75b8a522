"""
Test configuration and fixtures
"""
import os

import pytest

# Set test environment before the package reads its settings
os.environ["RABI_ASYM_LOG_LEVEL"] = "WARNING"
os.environ["RABI_ASYM_DEFAULT_JOBS"] = "1"
os.environ["RABI_ASYM_NMAX_CAP"] = "4096"

from rabi_asym.core.config import get_settings
from rabi_asym.models import ModelParams


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test starts and ends with settings rebuilt from the environment"""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def override_settings(monkeypatch):
    """Set RABI_ASYM_* variables for one test"""
    def _override(**values):
        for key, value in values.items():
            monkeypatch.setenv(f"RABI_ASYM_{key}", str(value))
        get_settings.cache_clear()
        return get_settings()
    return _override


# Parameter sets of the published spectral graphs (omega = 1, Delta = 0.3)

@pytest.fixture
def noninteger_params() -> ModelParams:
    """M = 0.5"""
    return ModelParams(omega=1.0, g=0.0, epsilon=0.25, delta=0.3)


@pytest.fixture
def integer_params() -> ModelParams:
    """M = 1"""
    return ModelParams(omega=1.0, g=0.0, epsilon=0.5, delta=0.3)


@pytest.fixture
def symmetric_params() -> ModelParams:
    """epsilon = 0, the symmetric Rabi model"""
    return ModelParams(omega=1.0, g=0.0, epsilon=0.0, delta=0.3)
