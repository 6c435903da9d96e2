"""Parsing and unit helpers for SNR and gain grids."""

from decimal import Decimal, InvalidOperation
from typing import List

from app.core.errors import DomainError


def parse_range(text: str) -> List[float]:
    """Parse 'start:step:stop' (inclusive) or a comma-separated list of numbers.

    Args:
        text: Grid description, e.g. "0:5:30" or "0,10,20".

    Returns:
        Grid values in ascending order of construction.
    """
    text = text.strip()
    if not text:
        raise DomainError("Grid description is empty")
    try:
        if ":" in text:
            parts = [Decimal(p) for p in text.split(":")]
            if len(parts) != 3:
                raise DomainError(f"Range '{text}' must have the form start:step:stop")
            start, step, stop = parts
            if step <= 0:
                raise DomainError(f"Range step must be positive, got {step}")
            if stop < start:
                raise DomainError(f"Range stop {stop} is below start {start}")
            count = int((stop - start) / step) + 1
            return [float(start + i * step) for i in range(count)]
        return [float(Decimal(p)) for p in text.split(",") if p.strip()]
    except InvalidOperation as e:
        raise DomainError(f"Malformed grid '{text}'") from e


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    return float(10.0 ** (value_db / 10.0))
