import numpy as np
import pytest

from src.geometry.twistor import standard_model
from src.models.lattice import FujikiRing, QuadraticSpace


@pytest.fixture(scope="session")
def model1():
    return standard_model(1)


@pytest.fixture(scope="session")
def model2():
    return standard_model(2)


@pytest.fixture
def lorentz():
    """q = diag(1, 1, 1, -1)"""
    return QuadraticSpace(np.diag([1.0, 1.0, 1.0, -1.0]), "lorentz")


@pytest.fixture
def split():
    """q = diag(1, 1, -1, -1)"""
    return QuadraticSpace(np.diag([1.0, 1.0, -1.0, -1.0]), "split")


@pytest.fixture
def ring1(lorentz):
    return FujikiRing(lorentz, n=1, C=1.0, name="lorentz")


@pytest.fixture
def ring2():
    gram = np.diag([1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0])
    return FujikiRing(QuadraticSpace(gram, "sig34"), n=2, C=1.0, name="sig34")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
