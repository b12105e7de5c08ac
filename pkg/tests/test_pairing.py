import math

import pytest

from qone import angle
from qone.cocycle import (CocycleElement, DenomFactor, JordanPochhammerWeight,
                          basis_elements)
from qone.errors import DivergenceError
from qone.pairing import (PairingProblem, convergence_window, det_closed_form,
                          det_pairing_matrix, offset_check, pair,
                          pair_with_scale, term_magnitudes)
from conftest import rel


def qbeta_problem(mod, alpha, beta, tol=1e-9):
    jp = JordanPochhammerWeight(mod, alpha, (beta,), (0.0,))
    phi = CocycleElement("q", {0: 1.0}, (DenomFactor(0.0, 1, "right"),))
    phit = CocycleElement("Q", {0: 1.0}, (DenomFactor(0.0, 1, "right"),))
    return PairingProblem(jp, phi, phit, tol=tol)


def qbeta_closed(mod, alpha, beta):
    return (angle(mod, 1.0) * angle(mod, alpha + beta)
            / (angle(mod, alpha) * angle(mod, beta)))


def test_qbeta_closed_form(mod):
    res = pair(qbeta_problem(mod, 0.4, 0.9))
    assert rel(res.value, qbeta_closed(mod, 0.4, 0.9)) < 1e-9


def test_qbeta_second_point(mod):
    res = pair(qbeta_problem(mod, 0.7, 1.3))
    assert rel(res.value, qbeta_closed(mod, 0.7, 1.3)) < 1e-9


def test_convergence_window(mod):
    jp = JordanPochhammerWeight(mod, 0.4, (0.9,), (0.0,))
    phi = CocycleElement("q", {0: 1.0}, (DenomFactor(0.0, 1, "right"),))
    phit = CocycleElement("Q", {0: 1.0}, (DenomFactor(0.0, 1, "right"),))
    lo, hi = convergence_window(jp, phi, phit)
    assert lo < 0.4 < hi


def test_divergence_outside_window(mod):
    with pytest.raises(DivergenceError):
        pair(qbeta_problem(mod, 5.0, 0.9))


def test_offset_independence(mod):
    d = offset_check(qbeta_problem(mod, 0.4, 0.9), tol=1e-9)
    assert d < 1e-10 * abs(qbeta_closed(mod, 0.4, 0.9))


def test_pair_with_scale_consistency(mod):
    prob = qbeta_problem(mod, 0.4, 0.9)
    res, scale = pair_with_scale(prob)
    assert rel(res.value, pair(prob).value) < 1e-12
    assert scale >= abs(res.value) * (1 - 1e-12)
    assert scale == pytest.approx(term_magnitudes(prob))


def test_det_n1_matches_closed_form(mod):
    jp = JordanPochhammerWeight(mod, 0.5, (0.9,), (0.1,))
    res = det_pairing_matrix(jp, tol=1e-9)
    assert rel(res.numeric_det, res.closed_form) < 1e-8
    assert res.closed_form == det_closed_form(jp)


def test_det_n1_reduces_to_pairing(mod):
    # the 1x1 determinant is the pairing of the two basis elements
    jp = JordanPochhammerWeight(mod, 0.5, (0.9,), (0.1,))
    qb, Qb = basis_elements(jp)
    direct = pair(PairingProblem(jp, qb[0], Qb[0], tol=1e-9)).value
    res = det_pairing_matrix(jp, tol=1e-9)
    assert rel(res.numeric_det, direct) < 1e-10


def test_residue_corrected_contours_agree(mod):
    # moving the line across a pole family member must leave the value
    # unchanged once the crossed pole's residue is accounted for
    prob = qbeta_problem(mod, 0.4, 0.9)
    v0 = pair(prob).value
    d = offset_check(prob, shift=1.0, tol=1e-9)
    assert d < 1e-9 * abs(v0)
