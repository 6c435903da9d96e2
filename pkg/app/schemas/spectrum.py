"""Schemas for eigenvalue densities expressed as Bessel-K series."""

from typing import Any, List, Optional, Tuple

import numpy as np
from mpmath import mp
from pydantic import BaseModel, Field, PrivateAttr, model_validator

from app.schemas.numeric import LogScaledReal


class BesselTerm(BaseModel):
    """One term coeff * lambda^(half_power/2) * K_order(2 sqrt(lambda))."""

    coeff: LogScaledReal = Field(..., description="Signed log-scaled coefficient")
    half_power: int = Field(..., description="Twice the exponent of lambda")
    bessel_order: int = Field(..., ge=0, description="Order of the Bessel-K factor")


class BesselTermSeries(BaseModel):
    """Finite sum of Bessel terms sharing the damping factor exp(-decay_rate * lambda).

    Series built for large normalized gains also carry their coefficients as
    decimal strings together with the number of digits they must be summed at.
    """

    decay_rate: float = Field(..., ge=0, description="The a in exp(-a * lambda)")
    terms: List[BesselTerm] = Field(default_factory=list, description="Series terms")
    working_dps: Optional[int] = Field(
        None, ge=1, description="Decimal digits for extended-precision evaluation"
    )
    precise_coeffs: Optional[List[str]] = Field(
        None, description="Term coefficients as decimal strings, aligned with terms"
    )

    _arrays: Tuple[np.ndarray, ...] = PrivateAttr()
    _precise: Optional[List[Any]] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def check_precise_coeffs(self) -> "BesselTermSeries":
        """Extended coefficients come with a precision and match the terms one to one."""
        if (self.working_dps is None) != (self.precise_coeffs is None):
            raise ValueError("working_dps and precise_coeffs must be given together")
        if self.precise_coeffs is not None and len(self.precise_coeffs) != len(self.terms):
            raise ValueError(
                f"Got {len(self.precise_coeffs)} precise coefficients for {len(self.terms)} terms"
            )
        return self

    def model_post_init(self, __context) -> None:
        nonzero = [t for t in self.terms if t.coeff.sign != 0]
        self._arrays = (
            np.array([t.coeff.log_magnitude for t in nonzero], dtype=float),
            np.array([t.coeff.sign for t in nonzero], dtype=float),
            np.array([t.half_power for t in nonzero], dtype=float),
            np.array([t.bessel_order for t in nonzero], dtype=int),
        )

    @property
    def arrays(self) -> Tuple[np.ndarray, ...]:
        """Term data as (log|coeff|, sign, half_power, order) arrays."""
        return self._arrays

    @property
    def is_extended(self) -> bool:
        return self.working_dps is not None

    @property
    def precise(self) -> List[Any]:
        """Coefficients as mpmath numbers, parsed once at the working precision."""
        if self._precise is None:
            with mp.workdps(self.working_dps):
                self._precise = [mp.mpf(c) for c in self.precise_coeffs]
        return self._precise

    def __len__(self) -> int:
        return len(self.terms)
