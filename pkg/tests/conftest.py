import numpy as np
import pytest

from frobgeom.models import bose_ideal_gas, classical_ideal_gas, synthetic_potential

QUAD_CFG = """\
dimension = 2
box = -5:5, -5:5
term = 0.5 * x1^2
term = 0.5 * x2^2
"""

CUBIC3D_CFG = """\
name = cubic3d
dimension = 3
box = -0.5:0.5, -0.5:0.5, -0.5:0.5
term = 0.5 * x1^2
term = 0.5 * x2^2
term = 0.5 * x3^2
term = x1 * x2 * x3
term = x1^4
"""

GRID_BETA = np.linspace(0.5, 2.0, 5)
GRID_GAMMA = np.linspace(0.1, 3.0, 5)
GAS_GRID = [(float(b), float(g)) for b in GRID_BETA for g in GRID_GAMMA]


@pytest.fixture(scope="session")
def classical():
    return classical_ideal_gas()


@pytest.fixture(scope="session")
def bose():
    return bose_ideal_gas()


@pytest.fixture(scope="session", params=["classical", "bose"])
def gas(request, classical, bose):
    return {"classical": classical, "bose": bose}[request.param]


@pytest.fixture(scope="session")
def quad():
    return synthetic_potential(QUAD_CFG)


@pytest.fixture(scope="session")
def cubic3d():
    return synthetic_potential(CUBIC3D_CFG)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
