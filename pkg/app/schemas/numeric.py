"""Schemas for sign/log-magnitude number representation."""

import math
from typing import Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import logsumexp

from app.core.errors import DomainError


class LogScaledReal(BaseModel):
    """A real number stored as sign and natural log of its magnitude."""

    model_config = ConfigDict(frozen=True)

    log_magnitude: float = Field(..., description="Natural log of |x|; -inf for zero")
    sign: int = Field(..., description="Sign of x: -1, 0 or +1")

    @field_validator("sign")
    @classmethod
    def validate_sign(cls, v: int) -> int:
        """Validate that the sign is one of -1, 0, +1."""
        if v not in (-1, 0, 1):
            raise ValueError(f"Sign must be -1, 0 or +1 (received: {v})")
        return v

    @model_validator(mode="after")
    def check_zero_consistency(self) -> "LogScaledReal":
        """Zero sign and -inf magnitude must appear together."""
        if math.isnan(self.log_magnitude):
            raise ValueError("log_magnitude cannot be NaN")
        if (self.sign == 0) != (self.log_magnitude == -math.inf):
            raise ValueError(
                f"Inconsistent zero encoding: sign={self.sign}, log_magnitude={self.log_magnitude}"
            )
        return self

    @classmethod
    def zero(cls) -> "LogScaledReal":
        return cls(log_magnitude=-math.inf, sign=0)

    @classmethod
    def one(cls) -> "LogScaledReal":
        return cls(log_magnitude=0.0, sign=1)

    @classmethod
    def from_float(cls, x: float) -> "LogScaledReal":
        if x == 0:
            return cls.zero()
        if not math.isfinite(x):
            raise DomainError(f"Cannot log-scale a non-finite value: {x}")
        return cls(log_magnitude=math.log(abs(x)), sign=1 if x > 0 else -1)

    @classmethod
    def from_log(cls, log_magnitude: float, sign: int = 1) -> "LogScaledReal":
        if sign == 0 or log_magnitude == -math.inf:
            return cls.zero()
        return cls(log_magnitude=float(log_magnitude), sign=int(sign))

    @classmethod
    def sum_of(cls, values: Iterable["LogScaledReal"]) -> "LogScaledReal":
        """Signed sum evaluated without leaving log space."""
        items = [v for v in values if v.sign != 0]
        if not items:
            return cls.zero()
        logs = np.array([v.log_magnitude for v in items])
        signs = np.array([v.sign for v in items], dtype=float)
        total, sign = logsumexp(logs, b=signs, return_sign=True)
        if sign == 0 or not np.isfinite(total):
            return cls.zero()
        return cls(log_magnitude=float(total), sign=int(sign))

    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self) -> float:
        return self.to_float()

    def __mul__(self, other: "LogScaledReal") -> "LogScaledReal":
        if self.sign == 0 or other.sign == 0:
            return LogScaledReal.zero()
        return LogScaledReal(
            log_magnitude=self.log_magnitude + other.log_magnitude,
            sign=self.sign * other.sign,
        )

    def __truediv__(self, other: "LogScaledReal") -> "LogScaledReal":
        if other.sign == 0:
            raise DomainError("Division by a log-scaled zero")
        if self.sign == 0:
            return LogScaledReal.zero()
        return LogScaledReal(
            log_magnitude=self.log_magnitude - other.log_magnitude,
            sign=self.sign * other.sign,
        )

    def __neg__(self) -> "LogScaledReal":
        if self.sign == 0:
            return self
        return LogScaledReal(log_magnitude=self.log_magnitude, sign=-self.sign)

    def scale(self, log_factor: float) -> "LogScaledReal":
        """Multiply by exp(log_factor)."""
        if self.sign == 0:
            return self
        return LogScaledReal(log_magnitude=self.log_magnitude + log_factor, sign=self.sign)
