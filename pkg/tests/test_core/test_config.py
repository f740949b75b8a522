"""
Tests for settings loading and validation
"""
from multiprocessing import cpu_count

import pytest
from pydantic import ValidationError

from rabi_asym.core.config import Settings, get_settings
from rabi_asym.workers.pool import resolve_jobs


class TestSettings:
    """Tests for Settings defaults and overrides"""

    def test_defaults(self):
        settings = Settings()
        assert settings.NMAX_CAP == 4096
        assert settings.TRACK_MIN_OVERLAP == 0.5
        assert settings.VALIDITY_RATIO == 0.2
        assert settings.GAP_TOL == 1e-6

    def test_env_override(self, override_settings):
        settings = override_settings(NMAX_CAP=128, GAP_TOL="1e-4")
        assert settings.NMAX_CAP == 128
        assert settings.GAP_TOL == 1e-4

    def test_cached(self):
        assert get_settings() is get_settings()

    def test_cap_below_default_truncation_rejected(self):
        with pytest.raises(ValidationError, match="NMAX_CAP"):
            Settings(NMAX_CAP=10)

    def test_nonpositive_tolerance_rejected(self):
        with pytest.raises(ValidationError, match="POLE_TOL"):
            Settings(POLE_TOL=0.0)

    def test_overlap_threshold_range(self):
        with pytest.raises(ValidationError):
            Settings(TRACK_MIN_OVERLAP=1.5)

    def test_series_policy(self):
        with pytest.raises(ValidationError):
            Settings(SERIES_STALL_TERMS=50, SERIES_MAX_TERMS=40)

    def test_unknown_log_level_rejected(self):
        with pytest.raises(ValidationError):
            Settings(LOG_LEVEL="LOUD")

    def test_zero_jobs_means_all_cores(self, override_settings):
        settings = override_settings(DEFAULT_JOBS=0)
        assert settings.DEFAULT_JOBS == 0
        assert resolve_jobs(None) == cpu_count()
        assert resolve_jobs(0) == cpu_count()
        assert resolve_jobs(3) == 3

    def test_negative_jobs_rejected(self):
        with pytest.raises(ValidationError, match="DEFAULT_JOBS"):
            Settings(DEFAULT_JOBS=-1)
