import numpy as np
import pytest

from dispersa import Grid1D, GridFunction, PresetDatum, sample
from dispersa.experiments import calibrate_constants


@pytest.fixture(scope="session")
def desk_grid():
    return Grid1D(1024, 100.0)


@pytest.fixture(scope="session")
def small_grid():
    return Grid1D(256, 100.0)


@pytest.fixture(scope="session")
def circle_grid():
    """L = 2*pi so that mode m sits exactly at frequency m."""
    return Grid1D(64, 2.0 * np.pi)


@pytest.fixture
def gaussian(desk_grid):
    return sample(PresetDatum("gaussian", amplitude=1.0, width=1.0), desk_grid)


@pytest.fixture
def sech(desk_grid):
    return sample(PresetDatum("sech", amplitude=1.0, scale=1.0), desk_grid)


@pytest.fixture(scope="session")
def calibrated(desk_grid):
    """Empirical constants (c0, kernel constants, space-time ratio) fitted
    once per session on the default grid."""
    return calibrate_constants(desk_grid)["constants"]


def rel_l2(a: GridFunction, b: GridFunction) -> float:
    """Relative L2 distance between two grid functions."""
    denom = b.l2_norm()
    return (a - b).l2_norm() / denom if denom else (a - b).l2_norm()


def l2_of(values, grid) -> float:
    return float(np.sqrt(grid.dx * np.sum(np.abs(values) ** 2)))
