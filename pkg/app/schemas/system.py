"""Schemas describing the dual-hop system under analysis."""

import math

from pydantic import BaseModel, ConfigDict, Field
from scipy.special import gammaln


class SystemConfig(BaseModel):
    """Antenna triple, relay gain and per-hop SNR of an AF dual-hop link."""

    model_config = ConfigDict(frozen=True)

    n_s: int = Field(..., ge=1, description="Number of source antennas")
    n_r: int = Field(..., ge=1, description="Number of relay antennas")
    n_d: int = Field(..., ge=1, description="Number of destination antennas")
    alpha: float = Field(..., gt=0, description="Total power gain of the relay")
    rho: float = Field(default=0.0, ge=0, description="Per-hop SNR (linear)")

    @classmethod
    def from_alpha_over_rho(
        cls, n_s: int, n_r: int, n_d: int, beta: float, rho: float
    ) -> "SystemConfig":
        """Build a config with the relay gain tied to the SNR as alpha = beta * rho."""
        return cls(n_s=n_s, n_r=n_r, n_d=n_d, alpha=beta * rho, rho=rho)

    @property
    def q(self) -> int:
        return min(self.n_d, self.n_r)

    @property
    def p(self) -> int:
        return max(self.n_d, self.n_r)

    @property
    def s(self) -> int:
        return min(self.n_s, self.q)

    @property
    def a(self) -> float:
        """Per-antenna normalized relay gain alpha / (n_r (1 + rho))."""
        return self.alpha / (self.n_r * (1.0 + self.rho))

    @property
    def log_k(self) -> float:
        """Natural log of the normalization constant of the beta spectrum."""
        return normalization_log_k(self.q, self.p)

    @property
    def label(self) -> str:
        return f"({self.n_s},{self.n_r},{self.n_d})"

    def with_rho(self, rho: float) -> "SystemConfig":
        return self.model_copy(update={"rho": rho})

    def with_alpha(self, alpha: float) -> "SystemConfig":
        return self.model_copy(update={"alpha": alpha})


def normalization_log_k(q: int, p: int) -> float:
    """Log of 1 / prod_{i=1}^q Gamma(q-i+1) Gamma(p-i+1)."""
    return -math.fsum(
        float(gammaln(q - i + 1) + gammaln(p - i + 1)) for i in range(1, q + 1)
    )
