"""Schemas for Monte Carlo random streams and estimates."""

import math
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

_UINT64_MAX = 2**64 - 1


class RngStream(BaseModel):
    """A reproducible random stream identified by (seed, stream_id)."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(..., ge=0, le=_UINT64_MAX, description="Base seed")
    stream_id: int = Field(default=0, ge=0, le=_UINT64_MAX, description="Stream index")

    def generator(self, *shard: int) -> np.random.Generator:
        """Generator for this stream, optionally for a shard within it."""
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *shard))
        return np.random.default_rng(sequence)

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(seed=self.seed, stream_id=stream_id)


class McEstimate(BaseModel):
    """Sample mean with its standard error."""

    mean: float = Field(..., description="Sample mean")
    stderr: float = Field(..., ge=0, description="Sample std / sqrt(n_trials)")
    n_trials: int = Field(..., ge=1, description="Number of samples used")
    n_skipped: int = Field(default=0, ge=0, description="Draws discarded as singular")

    @classmethod
    def from_samples(cls, values: Sequence[float], n_skipped: int = 0) -> "McEstimate":
        values = np.asarray(values, dtype=float)
        n = values.size
        mean = math.fsum(values) / n
        if n > 1:
            var = math.fsum((values - mean) ** 2) / (n - 1)
        else:
            var = 0.0
        return cls(mean=mean, stderr=math.sqrt(var / n), n_trials=n, n_skipped=n_skipped)

    def within(self, target: float, n_sigma: float = 3.0) -> bool:
        """Whether target lies within n_sigma standard errors of the mean."""
        return abs(self.mean - target) <= n_sigma * self.stderr + 1e-12 * max(1.0, abs(target))
