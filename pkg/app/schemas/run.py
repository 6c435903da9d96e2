"""Schemas for command-line runs and reference-table checks."""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from app.core.config import settings

_MIN_MC_TRIALS = 100


class Subcommand(str, Enum):
    """Commands offered by the command-line front end."""

    PDF = "pdf"
    CAPACITY = "capacity"
    BOUNDS = "bounds"
    HIGHSNR = "highsnr"
    MC = "mc"
    SWEEP = "sweep"
    TABLES = "tables"


class OutputFormat(str, Enum):
    """Output encodings."""

    CSV = "csv"
    JSON = "json"


class RunSpec(BaseModel):
    """A fully parsed command-line invocation."""

    subcommand: Subcommand = Field(..., description="Command to run")
    n_s: int = Field(default=2, ge=1, description="Source antennas")
    n_r: int = Field(default=3, ge=1, description="Relay antennas")
    n_d: int = Field(default=4, ge=1, description="Destination antennas")
    alpha: Optional[float] = Field(None, gt=0, description="Fixed relay gain")
    alpha_over_rho: Optional[float] = Field(
        None, gt=0, description="Relay gain coupled to the SNR as alpha = beta * rho"
    )
    rho_db: List[float] = Field(default_factory=list, description="SNR grid in dB")
    alpha_grid: List[float] = Field(
        default_factory=list, description="Relay gain grid (linear)"
    )
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0, le=2**64 - 1)
    trials: int = Field(default_factory=lambda: settings.DEFAULT_TRIALS, ge=1)
    bins: int = Field(default=50, ge=1, description="Histogram bins for pdf output")
    which: str = Field(default="all", description="Reference table to report")
    output: Optional[Path] = Field(None, description="Output file; stdout when omitted")
    format: OutputFormat = Field(default=OutputFormat.CSV, description="Output encoding")

    @model_validator(mode="after")
    def check_combination(self) -> "RunSpec":
        """Validate flag combinations for the chosen subcommand."""
        if self.alpha is not None and self.alpha_over_rho is not None:
            raise ValueError("--alpha and --alpha-over-rho are mutually exclusive")

        cmd = self.subcommand
        gain_given = self.alpha is not None or self.alpha_over_rho is not None
        if cmd in (Subcommand.CAPACITY, Subcommand.BOUNDS, Subcommand.MC):
            if not self.rho_db:
                raise ValueError(f"{cmd.value} requires a non-empty --rho-db grid")
            if not gain_given:
                raise ValueError(f"{cmd.value} requires --alpha or --alpha-over-rho")
        elif cmd == Subcommand.SWEEP:
            if not self.alpha_grid:
                raise ValueError("sweep requires a non-empty --alpha-grid")
            if len(self.rho_db) != 1:
                raise ValueError(f"sweep requires exactly one --rho-db value, got {len(self.rho_db)}")
            if self.alpha_over_rho is not None:
                raise ValueError("sweep varies alpha directly; --alpha-over-rho is not accepted")
        elif cmd == Subcommand.HIGHSNR:
            if self.alpha_over_rho is None:
                raise ValueError("highsnr requires --alpha-over-rho")
        elif cmd == Subcommand.PDF:
            if not gain_given:
                raise ValueError("pdf requires --alpha or --alpha-over-rho")
            if len(self.rho_db) > 1:
                raise ValueError(f"pdf takes at most one --rho-db value, got {len(self.rho_db)}")
            if self.alpha_over_rho is not None and not self.rho_db:
                raise ValueError("pdf with --alpha-over-rho requires --rho-db")
        elif cmd == Subcommand.TABLES:
            if self.which not in ("I", "II", "example", "all"):
                raise ValueError(f"Unknown table '{self.which}' (expected I, II, example or all)")

        if cmd in (Subcommand.MC, Subcommand.PDF) and self.trials < _MIN_MC_TRIALS:
            raise ValueError(f"Monte Carlo runs require at least {_MIN_MC_TRIALS} trials, got {self.trials}")
        return self


class ReferenceRow(BaseModel):
    """A published offset or offset shift to reproduce."""

    kind: Literal["offset", "shift"] = Field(..., description="Quantity compared")
    n_s: int = Field(..., ge=1)
    n_r: int = Field(..., ge=1)
    n_d: int = Field(..., ge=1)
    beta: float = Field(..., gt=0, description="Ratio alpha / rho")
    k: Optional[int] = Field(
        None, ge=1, description="Added destination antennas; omitted for the limit"
    )
    reference_db: float = Field(..., description="Published value in dB")
    tolerance_db: float = Field(..., gt=0, description="Accepted absolute deviation")


class ReferenceCheck(BaseModel):
    """Outcome of recomputing one reference row."""

    table: str = Field(..., description="Table identifier")
    row: ReferenceRow
    computed_db: float = Field(..., description="Recomputed value in dB")

    @property
    def delta_db(self) -> float:
        return self.computed_db - self.row.reference_db

    @property
    def passed(self) -> bool:
        return abs(self.delta_db) <= self.row.tolerance_db


class RunReport(BaseModel):
    """JSON envelope: run metadata followed by the same rows as the CSV output."""

    metadata: Dict[str, Any] = Field(..., description="Version, seed and configuration")
    columns: List[str] = Field(..., description="Column order")
    rows: List[Dict[str, Any]] = Field(..., description="One mapping per output row")
