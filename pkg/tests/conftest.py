# tests/conftest.py
import pytest

from app.services.catalog import modelbank
from app.services.verification.verifysuite import a2_operators, g2_operators


@pytest.fixture(scope="session")
def h_g2():
    return modelbank.make_h_g2()


@pytest.fixture(scope="session")
def h_g2_w0():
    return modelbank.make_h_g2(symbolic=False, omega=0)


@pytest.fixture(scope="session")
def x_g2():
    return modelbank.make_x_g2()


@pytest.fixture(scope="session")
def k_g2():
    return modelbank.make_k_g2()


@pytest.fixture(scope="session")
def g2_ops():
    return g2_operators()


@pytest.fixture(scope="session")
def a2_ops():
    return a2_operators()
