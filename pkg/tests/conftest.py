import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("momenta", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("momenta")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "momenta" / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def heis():
    from momenta.group import builtin_group
    return builtin_group("heisenberg")


@pytest.fixture(scope="session")
def heis_alpha(heis):
    from momenta.imm import AlphaMap
    return AlphaMap(heis.poisson_manifold(), heis.bialgebra, tuple(heis.thetas()))


@pytest.fixture(scope="session")
def plane():
    from momenta.calculus import BivectorField, ChartDomain
    from momenta.poisson import PoissonManifold
    ch = ChartDomain(("x", "y"))
    return PoissonManifold(ch, BivectorField.from_matrix(ch, [[0, 1], [-1, 0]]))
