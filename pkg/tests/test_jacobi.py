import math

import pytest

from qone import make_modulus, torus_q
from qone.jacobi import (identity29_residual, little_jacobi, norm_constant,
                         orthogonality_pair)
from conftest import rel


def test_degree_and_constant_term(mod):
    for n in range(4):
        p = little_jacobi(n, 0.3, 0.4, mod)
        assert p.degree == n
    p0 = little_jacobi(0, 0.3, 0.4, mod)
    assert p0(0.7 + 0.2j) == pytest.approx(1.0)


def test_polynomial_evaluation_consistency(mod):
    # evaluating at the torus coordinate of x+1/omega equals evaluating at
    # the torus coordinate of x (q-side periodicity)
    p = little_jacobi(2, 0.3, 0.4, mod)
    x = 0.37
    assert rel(p(torus_q(mod, x + 1.0 / mod.omega)),
               p(torus_q(mod, x))) < 1e-12


def test_identity29_small_orders(mod):
    for m in range(3):
        for n in range(m, 3):
            assert abs(identity29_residual(m, n, 0.3, 6.0, mod)) < 1e-12


def test_orthogonality_companion_offdiag():
    mod = make_modulus(1.0 / (4.0 * math.sqrt(2.0)))
    r = orthogonality_pair(0, 1, 0.25, 0.4, mod, tol=1e-9)
    assert abs(r.target) == 0.0
    assert abs(r.numeric) < 1e-8


def test_orthogonality_companion_diag():
    mod = make_modulus(1.0 / (4.0 * math.sqrt(2.0)))
    r = orthogonality_pair(1, 1, 0.25, 0.4, mod, tol=1e-9)
    assert rel(r.numeric, r.target) < 1e-7
    assert rel(r.target, norm_constant(1, 0.25, 0.4, mod)) < 1e-12
