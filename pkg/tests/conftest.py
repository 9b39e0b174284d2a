import pytest

from isac_rd.core import SystemConfig, db_to_linear


@pytest.fixture
def default_config():
    """M = N = 12, T = 30, 5 dB: the default operating point."""
    return SystemConfig(M=12, N=12, T=30, rho=db_to_linear(5.0))


@pytest.fixture
def small_config():
    return SystemConfig(M=2, N=2, T=10, rho=1.0)
