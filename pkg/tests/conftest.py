import numpy as np
import pytest

from sectorlab import AlgebraElement, BlockShape


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def shape23():
    return BlockShape((2, 3))


def random_element(shape, rng):
    return AlgebraElement.random(shape, rng)


def random_hermitian(shape, rng):
    return AlgebraElement.random_hermitian(shape, rng)
