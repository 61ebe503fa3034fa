import pytest

from jitliq import kernels
from jitliq.params import CompetitionParams, MarketParams


@pytest.fixture(scope="session", autouse=True)
def _compiled():
    kernels.warmup()


@pytest.fixture
def market():
    """Thin-fee market with a JIT LP that always arrives."""
    return MarketParams(alpha=0.1, zeta=1.05, zeta_u=1.02, f=0.003, pi=1.0)


@pytest.fixture
def competition():
    return CompetitionParams(MarketParams(f=0.01, pi=0.5, zeta_u=1.2), e_j=3.0)


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
