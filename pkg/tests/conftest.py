import math

import pytest

from spiralspring.analysis import evaluate
from spiralspring.core import ONYX, DEFAULT_SPIRAL, DEFAULT_THICKNESS, LoadCase, ThicknessProfile
from spiralspring.elastica import SolverConfig, SpiralBeam
from spiralspring.geometry import SpiralKinematics
from spiralspring.optimizer import OptimizerConfig, optimize

QUARTER_TURN = math.pi / 2


@pytest.fixture(scope="session")
def kin():
    return SpiralKinematics(DEFAULT_SPIRAL)


@pytest.fixture(scope="session")
def grid(kin):
    return kin.default_grid(400)


@pytest.fixture(scope="session")
def uniform(grid):
    return ThicknessProfile.uniform(grid, DEFAULT_THICKNESS, 1e-3)


@pytest.fixture(scope="session")
def beam(kin, uniform):
    return SpiralBeam(kin, uniform, ONYX)


@pytest.fixture(scope="session")
def quarter(beam):
    """Uniform default spring twisted by 90 degrees."""
    return beam.solve(LoadCase(QUARTER_TURN), SolverConfig())


@pytest.fixture(scope="session")
def quarter_report(quarter):
    return evaluate(quarter)


@pytest.fixture(scope="session")
def history(kin, uniform):
    """Default optimisation run, shared by the optimizer and acceptance tests."""
    return optimize(kin, uniform, ONYX, LoadCase(QUARTER_TURN), SolverConfig(), OptimizerConfig())
