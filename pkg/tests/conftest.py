"""Shared fixtures for the capacity toolkit tests."""

import pytest

from app.schemas.montecarlo import RngStream
from app.schemas.system import SystemConfig


@pytest.fixture
def siso_config() -> SystemConfig:
    """Single-antenna link with alpha = 2 and rho = 1."""
    return SystemConfig(n_s=1, n_r=1, n_d=1, alpha=2.0, rho=1.0)


@pytest.fixture
def config_234() -> SystemConfig:
    """(2,3,4) link, the q >= n_s branch."""
    return SystemConfig(n_s=2, n_r=3, n_d=4, alpha=2.0, rho=4.0)


@pytest.fixture
def config_423() -> SystemConfig:
    """(4,2,3) link, the q < n_s branch."""
    return SystemConfig(n_s=4, n_r=2, n_d=3, alpha=1.0, rho=2.0)


@pytest.fixture
def rng() -> RngStream:
    return RngStream(seed=20240611)
