import pytest

from ztel.algebra import HEISENBERG, SOL, Automorphism
from ztel.compactify import build_slope_spec
from ztel.nullity import eta_estimate
from ztel.telescope import fundamental_domain


@pytest.fixture(scope="session")
def heis():
    return Automorphism(HEISENBERG)


@pytest.fixture(scope="session")
def sol():
    return Automorphism(SOL)


@pytest.fixture(scope="session")
def heis_domain(heis):
    return fundamental_domain(heis, 0.25)


@pytest.fixture(scope="session")
def sol_domain(sol):
    return fundamental_domain(sol, 0.25)


@pytest.fixture(scope="session")
def heis_eta(heis, heis_domain):
    return eta_estimate(heis, heis_domain, 80)


@pytest.fixture(scope="session")
def sol_eta(sol, sol_domain):
    return eta_estimate(sol, sol_domain, 80)


@pytest.fixture(scope="session")
def heis_spec(heis, heis_eta):
    return build_slope_spec(heis, heis_eta, mode="standard")


@pytest.fixture(scope="session")
def sol_spec(sol, sol_eta):
    return build_slope_spec(sol, sol_eta, mode="exponential")
