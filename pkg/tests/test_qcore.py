import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qone import make_modulus, poch, torus_Q, torus_q
from qone.errors import DomainError

finite_complex = st.complex_numbers(max_magnitude=2.0, allow_nan=False,
                                    allow_infinity=False)


def test_modulus_basic(mod):
    assert mod.omega == pytest.approx(1.0 / math.sqrt(2.0))
    assert mod.q == pytest.approx(cmath.exp(2j * math.pi * mod.omega))
    assert mod.Qbig == pytest.approx(cmath.exp(2j * math.pi / mod.omega))
    assert abs(abs(mod.q) - 1.0) < 1e-15
    assert abs(abs(mod.Qbig) - 1.0) < 1e-15


def test_modulus_rejects_bad_omega():
    with pytest.raises(DomainError):
        make_modulus(0.0)
    with pytest.raises(DomainError):
        make_modulus(-0.5)


def test_torus_periods(mod):
    z = 0.37 + 0.21j
    # torus_q has period 1/omega in z, torus_Q has period 1.
    assert torus_q(mod, z + 1.0 / mod.omega) == pytest.approx(
        torus_q(mod, z), rel=1e-12)
    assert torus_Q(mod, z + 1.0) == pytest.approx(torus_Q(mod, z), rel=1e-12)
    # unit shifts multiply by the corresponding deformation parameter
    assert torus_q(mod, z + 1.0) == pytest.approx(
        mod.q * torus_q(mod, z), rel=1e-12)
    assert torus_Q(mod, z + 1.0 / mod.omega) == pytest.approx(
        mod.Qbig * torus_Q(mod, z), rel=1e-12)


def test_poch_base_cases():
    assert poch(0.3 + 0.1j, 0.5j, 0) == 1.0
    x, b = 0.3 + 0.1j, cmath.exp(0.7j)
    assert poch(x, b, 1) == pytest.approx(1 - x)
    assert poch(x, b, 3) == pytest.approx((1 - x) * (1 - x * b)
                                          * (1 - x * b * b))


@settings(max_examples=100, deadline=None)
@given(x=finite_complex, b=finite_complex,
       m=st.integers(0, 8), n=st.integers(0, 8))
def test_poch_additivity(x, b, m, n):
    lhs = poch(x, b, m + n)
    rhs = poch(x, b, m) * poch(x * b ** m, b, n)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs), abs(rhs))
