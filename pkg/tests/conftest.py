import math

import pytest

from qone import make_modulus

OMEGA = 1.0 / math.sqrt(2.0)


@pytest.fixture(scope="session")
def mod():
    return make_modulus(OMEGA)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)
