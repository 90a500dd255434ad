"""
Shared fields and small algebras for the test-suite
"""

import pytest

from app.core.exactfield import extension_field, prime_field, rationals
from app.services.constructions import exterior_B, rigid_algebra, split_etale, wrap_simple, zero_algebra


@pytest.fixture(scope="session")
def f3():
    return prime_field(3)


@pytest.fixture(scope="session")
def f5():
    return prime_field(5)


@pytest.fixture(scope="session")
def f7():
    return prime_field(7)


@pytest.fixture(scope="session")
def f11():
    return prime_field(11)


@pytest.fixture(scope="session")
def f49():
    return extension_field(7, 2, [1, 0, 1])


@pytest.fixture(scope="session")
def qq():
    return rationals()


@pytest.fixture(scope="session")
def rigid2_f5(f5):
    return rigid_algebra(2, f5)


@pytest.fixture(scope="session")
def wrapped_rigid_f5(rigid2_f5):
    return wrap_simple(rigid2_f5)


@pytest.fixture(scope="session")
def b2_f7(f7):
    return exterior_B(2, f7)


@pytest.fixture(scope="session")
def b2_f5(f5):
    return exterior_B(2, f5)


@pytest.fixture(scope="session")
def e2_f5(f5):
    return split_etale(2, f5)


@pytest.fixture(scope="session")
def zero2_f5(f5):
    return zero_algebra(2, f5)
