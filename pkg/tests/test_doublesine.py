import cmath
import math
import random

import pytest

from qone import angle, classify_lattice, make_modulus, residue_inverse_angle, sigma
from qone.doublesine import log_angle
from qone.errors import PoleError
from conftest import rel

# Frozen reference values from an independent high-precision evaluation
# (mpmath double-gamma route, 30 significant digits, omega = 1/sqrt(2)).
ANGLE_ORACLE = [
    (0.5 + 0.0j, 0.687568511290114457986 + 1.235819380930040210433j),
    (1.3 + 0.7j, 0.2061575266064292566131 + 0.9702996427030074369653j),
    (0.25 - 1.1j, -88.97301308976616523815 + 59.55650430023564275522j),
    (2.6 + 3.2j, 0.2280139250808837953614 + 0.9736579125702686745667j),
    (-1.7 + 0.4j, 0.1704633814460169591814 + 1.05757468926168065824j),
]

RESIDUE_ORACLE = [
    (0, 0, 0.1892681907127351033502 + 0.0j),
    (1, 0, 0.09463409535636755167512 + 0.07203763820723610713377j),
    (0, 1, 0.09463409535636755024932 - 0.02614043699355424710403j),
    (1, 1, 0.05726639698843744785567 + 0.02294860060684092947219j),
    (2, 1, 0.0318027033433661095497 + 0.003565054504182268976452j),
]


@pytest.mark.parametrize("x,ref", ANGLE_ORACLE)
def test_angle_oracle(mod, x, ref):
    assert rel(angle(mod, x), ref) < 1e-12


def test_angle_at_inverse_omega(mod):
    # <1/omega> is purely imaginary with modulus omega^{1/4}-like value
    assert rel(angle(mod, 1.0 / mod.omega),
               0.8408964152537145430311j) < 1e-12


def test_angle_small_omega():
    mod = make_modulus(1.0 / (4.0 * math.sqrt(2.0)))
    ref = 0.008531041390572691996207 + 1.507742488466269092946j
    assert rel(angle(mod, 0.8 + 0.3j), ref) < 1e-9


@pytest.mark.parametrize("m,n,ref", RESIDUE_ORACLE)
def test_residue_inverse_angle_oracle(mod, m, n, ref):
    assert rel(residue_inverse_angle(mod, m, n), ref) < 1e-12


def test_shift_and_reflection_identities(mod):
    rng = random.Random("doublesine-unit")
    Qc = 1.0 + 1.0 / mod.omega
    for _ in range(25):
        x = complex(rng.uniform(-3, 3), rng.uniform(-4, 4))
        qx = cmath.exp(2j * math.pi * mod.omega * x)
        Qx = cmath.exp(2j * math.pi * x)
        assert rel(angle(mod, x + 1), angle(mod, x) / (1 - qx)) < 1e-10
        assert rel(angle(mod, x + 1 / mod.omega),
                   angle(mod, x) / (1 - Qx)) < 1e-10
        assert rel(angle(mod, x) * angle(mod, Qc - x), sigma(mod, x)) < 1e-10


def test_angle_one_value(mod):
    assert abs(angle(mod, 1.0) - 1j / math.sqrt(mod.omega)) < 1e-13


def test_near_zero_slope(mod):
    slope = 2 * math.pi * math.sqrt(mod.omega)
    for eps in (1e-3, 1e-4):
        assert abs(angle(mod, eps) / eps - slope) < 1e-2 * slope


def test_pole_raises(mod):
    Qc = 1.0 + 1.0 / mod.omega
    with pytest.raises(PoleError):
        angle(mod, Qc)


def test_lattice_classification(mod):
    Qc = 1.0 + 1.0 / mod.omega
    assert classify_lattice(mod, 0.0).kind == "zero"
    assert classify_lattice(mod, Qc).kind == "pole"
    assert classify_lattice(mod, 0.3).kind == "regular"


def test_log_angle_matches_value(mod):
    for x in (0.5 + 0.0j, 1.3 + 0.7j, 0.25 - 1.1j, -1.7 + 0.4j):
        assert rel(cmath.exp(log_angle(mod, x)), angle(mod, x)) < 1e-11


def test_log_angle_deep_strip_no_overflow(mod):
    # direct evaluation overflows far from the real axis; the log stays finite
    lv = log_angle(mod, 0.4 + 400j)
    assert math.isfinite(lv.real) and math.isfinite(lv.imag)
    lv2 = log_angle(mod, 0.4 - 400j)
    assert math.isfinite(lv2.real) and math.isfinite(lv2.imag)


def test_sigma_is_exact_exponential(mod):
    x = 0.37 - 0.83j
    w = mod.omega
    ref = cmath.exp(1j * math.pi * ((1 + w) * x - w * x * x))
    assert rel(sigma(mod, x), ref) < 1e-14
