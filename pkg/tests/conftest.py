import numpy as np
import pytest

from bitassist.schemas.options import SolverOptions
from bitassist.services.channels import make_hashing_channel, make_prevedel


@pytest.fixture
def prevedel():
    return make_prevedel()


@pytest.fixture
def hashing2():
    return make_hashing_channel(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fast_opts():
    """Reduced search for sweeps; headline values use the defaults"""
    return SolverOptions(
        restarts=4,
        iterations=400,
        family_restarts=6,
        seesaw_rounds=12,
        angle_sweeps=2,
    )
