import pytest

from qboson.algebra import QBosonAlgebra
from qboson.cartan import preset


@pytest.fixture(scope="session")
def a1():
    return QBosonAlgebra(preset("A1"))


@pytest.fixture(scope="session")
def a2():
    return QBosonAlgebra(preset("A2"))


@pytest.fixture(scope="session")
def b2():
    return QBosonAlgebra(preset("B2"))


@pytest.fixture(scope="session")
def g2():
    return QBosonAlgebra(preset("G2"))


@pytest.fixture(scope="session")
def a3():
    return QBosonAlgebra(preset("A3"))
