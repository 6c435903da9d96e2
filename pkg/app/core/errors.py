"""Exception hierarchy for the capacity toolkit.

Validation-style failures (bad arguments, coincident spectra) map to CLI exit
code 2; everything under :class:`NumericalError` maps to exit code 3.
"""

from typing import Optional


class CapacityToolkitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(CapacityToolkitError, ValueError):
    """An argument lies outside the domain of an operation."""


class DegenerateSpectrumError(DomainError):
    """Two β values are closer than the configured gap tolerance."""

    def __init__(self, gap: float, tolerance: float):
        self.gap = gap
        self.tolerance = tolerance
        super().__init__(
            f"Spectrum gap {gap:.3e} is below the tolerance {tolerance:.3e}"
        )


class NumericalError(CapacityToolkitError):
    """A numerical procedure failed to deliver a trustworthy result."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested accuracy."""

    def __init__(
        self,
        message: str,
        achieved_error: Optional[float] = None,
        requested_error: Optional[float] = None,
    ):
        self.achieved_error = achieved_error
        self.requested_error = requested_error
        if achieved_error is not None:
            message = f"{message} (achieved {achieved_error:.3e}, requested {requested_error:.3e})"
        super().__init__(message)


class ConvergenceError(NumericalError):
    """An eigen-solver or matrix factorization failed."""


class PdfAssemblyError(NumericalError):
    """A density series evaluated to a clearly negative value."""
