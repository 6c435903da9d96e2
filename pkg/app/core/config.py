"""Configuration settings for the AF MIMO capacity toolkit."""

from pathlib import Path

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        case_sensitive=False
    )

    # Project information
    PROJECT_NAME: str = "AF MIMO Capacity"
    VERSION: str = "0.1.0"
    DESCRIPTION: str = "Ergodic capacity of amplify-and-forward MIMO dual-hop channels"

    # Parallelism
    MAX_WORKERS: int = Field(default=1)  # caps joblib workers for sweeps and MC shards

    # Monte Carlo settings
    DEFAULT_SEED: int = Field(default=7)
    DEFAULT_TRIALS: int = Field(default=100_000)
    MC_SHARD_SIZE: int = Field(default=10_000)
    EIGEN_RANK_TOLERANCE: float = Field(default=1e-10)

    # Quadrature settings
    QUAD_REL_TOL: float = Field(default=1e-9)
    QUAD_ABS_TOL: float = Field(default=1e-12)
    QUAD_MAX_SUBDIVISIONS: int = Field(default=200)

    # Numerical guards
    GAP_TOLERANCE: float = Field(default=1e-9)
    MAX_LOST_DIGITS: float = Field(default=6.0)  # beyond this, moment matrices switch to mpmath
    EXTENDED_GUARD_DIGITS: int = Field(default=30)
    PDF_CLAMP_TOLERANCE: float = Field(default=1e-12)
    PDF_NEGATIVE_TOLERANCE: float = Field(default=1e-9)

    # Reporting
    # Published offsets use a flat 3 dB per 3-dB unit (7.57 dB for (1,1,1), beta=1);
    # 10*log10(2) gives the exact conversion.
    DB_PER_3DB_UNIT: float = Field(default=3.0)
    REFERENCE_TABLES_PATH: Path = Field(
        default=Path(__file__).resolve().parent.parent / "data" / "reference_tables.yaml"
    )

    # Logging
    LOG_LEVEL: str = Field(default="INFO")

    @field_validator(
        "QUAD_REL_TOL",
        "QUAD_ABS_TOL",
        "GAP_TOLERANCE",
        "PDF_CLAMP_TOLERANCE",
        "PDF_NEGATIVE_TOLERANCE",
        "EIGEN_RANK_TOLERANCE",
        "DB_PER_3DB_UNIT",
        "MAX_LOST_DIGITS",
    )
    @classmethod
    def validate_positive(cls, v: float, info) -> float:
        """Validate that tolerances and unit factors are strictly positive."""
        if v <= 0:
            raise ValueError(f"{info.field_name} must be positive, got {v}")
        return v

    @field_validator("MAX_WORKERS", "MC_SHARD_SIZE", "QUAD_MAX_SUBDIVISIONS", "EXTENDED_GUARD_DIGITS")
    @classmethod
    def validate_count(cls, v: int, info) -> int:
        """Validate that counts are at least one."""
        if v < 1:
            raise ValueError(f"{info.field_name} must be >= 1, got {v}")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalize the log level name."""
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level


# Create global settings object
settings = Settings()
