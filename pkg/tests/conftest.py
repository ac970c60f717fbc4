import math

import numpy as np
import pytest

from frft_uncertainty.chirp import GaussianChirp2D
from frft_uncertainty.grid import Axis, GridFunction

REF_AXIS = Axis.symmetric(8.0, 256)
ALPHA = 2.0 * math.pi / 3.0
BETA = math.pi / 6.0


def rel_l2(a, b):
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


@pytest.fixture(scope="session")
def ref_axes():
    return (REF_AXIS, REF_AXIS)


@pytest.fixture(scope="session")
def case_a():
    return GaussianChirp2D.unit_norm(1.0, 0.5, 2.0, 1.0)


@pytest.fixture(scope="session")
def case_b():
    return GaussianChirp2D.unit_norm(1.0, 1.0, 2.0, 2.0)


@pytest.fixture(scope="session")
def case_a_grid(case_a, ref_axes):
    return case_a.sample(ref_axes)


@pytest.fixture(scope="session")
def case_b_grid(case_b, ref_axes):
    return case_b.sample(ref_axes)


@pytest.fixture(scope="session")
def gaussian_grid(ref_axes):
    return GridFunction.from_callable(lambda x, y: np.exp(-math.pi * (x * x + y * y)), ref_axes)
