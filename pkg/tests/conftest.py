import numpy as np
import pytest

import boltcert as bc


@pytest.fixture
def grid22():
    return bc.build_grid(2, 2)


@pytest.fixture
def canonical(grid22):
    """2x2 grid, f = 1 at the far corner, known optimum u0 with error 1/4."""
    f = bc.FunctionOnX([0.0, 0.0, 0.0, 1.0])
    u0 = bc.sum_element([0.0, 0.5], [-0.25, 0.25])
    return grid22, f, u0


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)
