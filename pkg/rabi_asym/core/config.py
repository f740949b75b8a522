from functools import lru_cache
from typing import Literal

from pydantic import model_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Numerical policy for the toolkit, overridable through RABI_ASYM_* env vars"""

    # App
    APP_NAME: str = "rabi-asym"
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    # === TRUNCATION ===
    NMAX_CAP: int = 4096  # hard cap on Fock levels for adaptive doubling
    TAIL_TOL: float = 1e-10  # squared amplitude allowed in the top 5% of levels
    ORTHO_TOL: float = 1e-8
    CONVERGENCE_TOL: float = 1e-9

    # === PARAMETER CLASSIFICATION ===
    INTEGER_TOL: float = 1e-9  # |M - round(M)| below this is the integer case
    POLE_TOL: float = 1e-8  # distance of z to a nonpositive integer
    ZERO_TOL: float = 1e-12  # relative size of an F denominator treated as a root
    GUARD_BAND: float = 1e-5  # closed form of calF hands over to the series near integer z

    # === SERIES POLICY ===
    SERIES_REL_TOL: float = 1e-16
    SERIES_STALL_TERMS: int = 30
    SERIES_MAX_TERMS: int = 100_000
    KUMMER_ASYMPTOTIC_X: float = 500.0

    # === DERIVATIVES ===
    FD_STEP: float = 1e-3  # base step for the z-derivative of calF

    # === SPECTRAL GRAPH ===
    TRACK_MIN_OVERLAP: float = 0.5
    TRACK_AMBIGUITY: float = 0.05
    GAP_TOL: float = 1e-6  # in units of omega

    # === VALIDITY FLAGS ===
    VALIDITY_RATIO: float = 0.2  # "much less than" means ratio below this
    COUPLING_RATIO: float = 1.0  # "omega at most g" means g/omega at least this

    # === CLI ===
    DEFAULT_JOBS: int = 1  # 0 = all cores

    class Config:
        env_prefix = "RABI_ASYM_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        extra = "ignore"

    @model_validator(mode="after")
    def _validate_policy(self) -> "Settings":
        tolerances = {
            "TAIL_TOL": self.TAIL_TOL,
            "ORTHO_TOL": self.ORTHO_TOL,
            "CONVERGENCE_TOL": self.CONVERGENCE_TOL,
            "INTEGER_TOL": self.INTEGER_TOL,
            "POLE_TOL": self.POLE_TOL,
            "ZERO_TOL": self.ZERO_TOL,
            "GAP_TOL": self.GAP_TOL,
        }
        for name, value in tolerances.items():
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")

        # default truncation at g=0 is ceil(6^2) + 20
        if self.NMAX_CAP < 56:
            raise ValueError(f"NMAX_CAP must be at least 56, got {self.NMAX_CAP}")

        if self.SERIES_STALL_TERMS < 1 or self.SERIES_MAX_TERMS <= self.SERIES_STALL_TERMS:
            raise ValueError("SERIES_MAX_TERMS must exceed SERIES_STALL_TERMS >= 1")

        if not 0 < self.TRACK_MIN_OVERLAP <= 1:
            raise ValueError("TRACK_MIN_OVERLAP must lie in (0, 1]")

        if self.DEFAULT_JOBS < 0:
            raise ValueError("DEFAULT_JOBS must be >= 0 (0 = all cores)")

        return self


@lru_cache
def get_settings() -> Settings:
    return Settings()
