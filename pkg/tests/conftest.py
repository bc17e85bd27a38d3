import numpy as np
import pytest

from liebend.algebra import make_algebra
from liebend.weyl import split_torus

SEED = 20240817


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def sl2():
    return make_algebra("sl", 2)


@pytest.fixture(scope="session")
def sl3():
    return make_algebra("sl", 3)


@pytest.fixture(scope="session")
def sl5():
    return make_algebra("sl", 5)


@pytest.fixture(scope="session")
def su21():
    return make_algebra("su", 2, 1)


@pytest.fixture(scope="session")
def su32():
    return make_algebra("su", 3, 2)


@pytest.fixture(scope="session")
def sl5_torus(sl5):
    return split_torus(sl5)


@pytest.fixture(scope="session")
def su21_torus(su21):
    return split_torus(su21)


@pytest.fixture(scope="session")
def su32_torus(su32):
    return split_torus(su32)


def random_algebra_element(alg, rng, scale=1.0):
    coords = rng.normal(size=alg.dim) * scale
    return alg.from_coordinates(coords)


def random_group_element(alg, rng, scale=0.3):
    from scipy.linalg import expm
    return expm(random_algebra_element(alg, rng, scale))
