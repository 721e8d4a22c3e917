import pytest

from degenpair import LorentzSqrtProfile, PairConfig, build_pair, koley_kar_pair


@pytest.fixture(scope="session")
def kk_pair():
    """Koley-Kar pair (nu=1, A1=1/144) on [-8, 8]."""
    return koley_kar_pair(1.0, 1.0 / 144.0, (8.0, 4001))


@pytest.fixture(scope="session")
def lorentz_pair():
    return build_pair(LorentzSqrtProfile(1.0), PairConfig(1.0), (8.0, 4001))


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit criteria of the package")

