import pytest

from qone.errors import DivergenceError
from qone.qhyper import (HGParams, connection_decomposition,
                         connection_residual, difference_equation_residual,
                         heine_residuals, phi_terminating, psi,
                         psi_residue_corrected)
from conftest import rel

# Frozen reference from an independent high-precision evaluation (mpmath,
# 30 significant digits) of the defining contour integral at
# (alpha, beta, gamma, x) = (0.4, 1.2, 1.3, 0.3), omega = 1/sqrt(2).
PSI_FIXTURE = 1.026624815121864825556 + 0.7910402905125115476774j


def test_psi_oracle(mod):
    par = HGParams(mod, 0.4, 1.2, 1.3, 0.3)
    assert rel(psi(par, tol=1e-10), PSI_FIXTURE) < 1e-9


def test_psi_outside_window_raises(mod):
    with pytest.raises(DivergenceError):
        psi(HGParams(mod, 5.0, 5.0, 0.1, 0.3))


def test_heine_residuals_fixture(mod):
    par = HGParams(mod, 0.4, 1.2, 1.3, 0.3)
    for r in heine_residuals(par, tol=1e-9):
        assert abs(r) < 1e-8


def test_connection_residual_fixture(mod):
    par = HGParams(mod, 0.4, 1.2, 1.3, 0.3)
    assert abs(connection_residual(par, tol=1e-9)) < 1e-8


def test_connection_decomposition(mod):
    par = HGParams(mod, 0.4, 1.2, 1.3, 0.3)
    total, direct = connection_decomposition(par, tol=1e-9)
    assert rel(total, direct) < 1e-8


def test_difference_equation_fixture(mod):
    par = HGParams(mod, 0.4, 1.2, 2.0, 0.3)
    assert abs(difference_equation_residual(par, tol=1e-9)) < 1e-8


def test_terminating_limit_n0(mod):
    # at alpha = 0 the function degenerates to the constant polynomial
    val = psi_residue_corrected(HGParams(mod, 0.0, 1.2, 1.3, 0.3), 0,
                                tol=1e-9)
    ref = phi_terminating(0, 1.2, 1.3, 0.3, mod)
    assert rel(val, ref) < 1e-8


def test_terminating_limit_n1(mod):
    val = psi_residue_corrected(HGParams(mod, -1.0, 1.2, 1.3, 0.3), 1,
                                tol=1e-9)
    ref = phi_terminating(1, 1.2, 1.3, 0.3, mod)
    assert rel(val, ref) < 1e-8
