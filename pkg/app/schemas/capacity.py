"""Schemas for capacity evaluations and their numerical settings."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import settings


class Method(str, Enum):
    """How a capacity value was obtained."""

    EXACT = "exact"
    UPPER = "upper"
    LOWER = "lower"
    HIGH_SNR_AFFINE = "high_snr_affine"
    FIXED_ALPHA_LIMIT = "fixed_alpha_limit"
    MONTE_CARLO = "monte_carlo"


class Transform(str, Enum):
    """Variable substitution applied before integrating over lambda."""

    SQRT_SUBSTITUTION = "sqrt_substitution"
    NONE = "none"


class Regime(str, Enum):
    """Asymptotic regimes in which AF capacity reduces to a single-hop capacity."""

    NR_LARGE = "nr_large"
    NS_LARGE = "ns_large"
    ND_LARGE = "nd_large"
    ALPHA_LARGE = "alpha_large"


class QuadratureSpec(BaseModel):
    """Accuracy targets for adaptive quadrature."""

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default_factory=lambda: settings.QUAD_REL_TOL, gt=0)
    abs_tol: float = Field(default_factory=lambda: settings.QUAD_ABS_TOL, gt=0)
    max_subdivisions: int = Field(
        default_factory=lambda: settings.QUAD_MAX_SUBDIVISIONS, ge=1
    )
    transform: Transform = Field(default=Transform.SQRT_SUBSTITUTION)


class CapacityPoint(BaseModel):
    """One capacity evaluation in bits/s/Hz."""

    rho: float = Field(..., ge=0, description="Per-hop SNR (linear)")
    value: float = Field(..., ge=0, description="Capacity in bits/s/Hz")
    method: Method = Field(..., description="Evaluation method")
    stderr: Optional[float] = Field(
        None, ge=0, description="Monte Carlo standard error"
    )
    quad_error: Optional[float] = Field(
        None, ge=0, description="Estimated quadrature error"
    )

    @model_validator(mode="after")
    def check_stderr(self) -> "CapacityPoint":
        """Standard errors accompany Monte Carlo points only."""
        if (self.stderr is not None) != (self.method == Method.MONTE_CARLO):
            raise ValueError(
                f"stderr must be set exactly for monte_carlo points (method={self.method.value})"
            )
        return self


class HighSnrChar(BaseModel):
    """High-SNR slope and power offset of the affine capacity expansion."""

    model_config = ConfigDict(frozen=True)

    slope: float = Field(..., description="Bits/s/Hz per 3 dB")
    offset_3db: float = Field(..., description="Power offset in 3-dB units")
    beta: float = Field(..., gt=0, description="Ratio alpha / rho")
    db_per_3db_unit: float = Field(
        default_factory=lambda: settings.DB_PER_3DB_UNIT, gt=0,
        description="dB value of one 3-dB unit used for reporting",
    )

    @property
    def offset_db(self) -> float:
        return self.offset_3db * self.db_per_3db_unit


class AnalogyResult(BaseModel):
    """AF capacity next to the single-hop capacity it approaches in a regime."""

    regime: Regime = Field(..., description="Asymptotic regime")
    af: CapacityPoint = Field(..., description="AF dual-hop capacity")
    single_hop: CapacityPoint = Field(..., description="Mapped single-hop capacity")

    @property
    def gap(self) -> float:
        return abs(self.af.value - self.single_hop.value)


class SweepPoint(BaseModel):
    """Exact capacity and bounds at one point of a rho or alpha grid."""

    rho: float = Field(..., ge=0, description="Per-hop SNR (linear)")
    alpha: float = Field(..., gt=0, description="Relay power gain")
    exact: float = Field(..., ge=0, description="Exact ergodic capacity")
    upper: float = Field(..., ge=0, description="Upper bound")
    lower: float = Field(..., ge=0, description="Lower bound")
    affine: Optional[float] = Field(
        None, ge=0, description="High-SNR affine approximation (coupled gain only)"
    )
    quad_error: float = Field(default=0.0, ge=0, description="Quadrature error of exact")
