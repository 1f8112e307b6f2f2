import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fixpairs import SpaceConfig
from fixpairs import bvp

settings.register_profile(
    "ci",
    deadline=None,
    max_examples=50,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def space32():
    return SpaceConfig()


@pytest.fixture(scope="session")
def sublinear_nl():
    return bvp.sublinear_affine()


@pytest.fixture(scope="session")
def sublinear_op(sublinear_nl, space32):
    return bvp.bvp_operator(sublinear_nl, space32)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
