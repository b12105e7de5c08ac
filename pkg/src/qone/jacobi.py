"""Little q-Jacobi polynomials at |q| = 1 and their orthogonality.

p_n^{(alpha,beta)}(t) is the terminating series
phi(q^{-n}, q^{alpha+beta+n+1}, q^{alpha+1}; q t), a polynomial in the torus
variable t, hence well defined at |q| = 1.  The polynomials are orthogonal
against the q-Beta kernel on a separating vertical line:

    Integral q^{alpha z} <z+1+1/omega> / <z+beta>
        p_m^{(alpha-1,beta-1)}(t) p_n^{(alpha-1,beta-1)}(t) dz
        = delta_{mn} c_n.

The proof reduces, coefficient by coefficient, to a purely algebraic identity
in q (implemented as identity29_residual) plus the q-Beta evaluation, so the
module offers both the direct contour route and the termwise algebraic route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cocycle import CocycleElement, DenomFactor, JordanPochhammerWeight
from .doublesine import angle
from .errors import DomainError, PoleError
from .pairing import PairingProblem, pair
from .qcore import ModulusParameters, poch, torus_q

__all__ = [
    "QPolynomial", "little_jacobi", "product_coeffs", "identity29_residual",
    "norm_constant", "orthogonality_pair", "OrthogonalityResult",
]


@dataclass(frozen=True)
class QPolynomial:
    """Polynomial in the q-torus variable t, ascending coefficients."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           tuple(complex(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: complex) -> complex:
        out = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            out = out * t + c
        return out


def little_jacobi(n: int, alpha: complex, beta: complex,
                  mod: ModulusParameters) -> QPolynomial:
    """p_n^{(alpha,beta)}(t) = phi(q^{-n}, q^{alpha+beta+n+1}, q^{alpha+1}; qt)."""
    if n < 0 or n != int(n):
        raise DomainError("polynomial degree must be a nonnegative integer")
    n = int(n)
    q = mod.q
    b = torus_q(mod, alpha + beta + n + 1)
    c = torus_q(mod, alpha + 1)
    coeffs = [1.0 + 0.0j]
    term = 1.0 + 0.0j
    for j in range(n):
        den = (1 - q ** (j + 1)) * (1 - c * q ** j)
        if den == 0:
            raise PoleError("vanishing Pochhammer factor in polynomial "
                            "coefficients", factor_index=j)
        term *= (1 - q ** (j - n)) * (1 - b * q ** j) / den * q
        coeffs.append(term)
    return QPolynomial(tuple(coeffs))


def product_coeffs(p: QPolynomial, r: QPolynomial) -> tuple:
    """Coefficients A_k of p(t) r(t)."""
    out = [0.0 + 0.0j] * (p.degree + r.degree + 1)
    for i, ci in enumerate(p.coeffs):
        for j, cj in enumerate(r.coeffs):
            out[i + j] += ci * cj
    return tuple(out)


def _rhs_factor(n: int, alpha: complex, beta: complex,
                mod: ModulusParameters) -> complex:
    """(1-q^{a+b-1})/(1-q^{a+b+2n-1}) (q)_n (q^b)_n /
    ((q^{a+b-1})_n (q^a)_n) q^{n a}."""
    q = mod.q
    qa = torus_q(mod, alpha)
    qb = torus_q(mod, beta)
    qab = torus_q(mod, alpha + beta)
    num = (1 - qab / q) * poch(q, q, n) * poch(qb, q, n)
    den = ((1 - qab * q ** (2 * n - 1)) * poch(qab / q, q, n)
           * poch(qa, q, n))
    if den == 0:
        raise PoleError("vanishing factor in the norm constant")
    return num / den * torus_q(mod, n * alpha)


def identity29_residual(m: int, n: int, alpha: complex, beta: complex,
                        mod: ModulusParameters) -> complex:
    """Scaled residual of the algebraic orthogonality identity

        sum_k A_k^{m,n} prod_{j=0}^{k-1} (1-q^{alpha+j})/(1-q^{alpha+beta+j})
            = delta_{mn} * (norm factor),

    where A_k are the product coefficients of
    p_m^{(alpha-1,beta-1)} p_n^{(alpha-1,beta-1)}."""
    q = mod.q
    qa = torus_q(mod, alpha)
    qab = torus_q(mod, alpha + beta)
    A = product_coeffs(little_jacobi(m, alpha - 1, beta - 1, mod),
                       little_jacobi(n, alpha - 1, beta - 1, mod))
    lhs = 0.0 + 0.0j
    ratio = 1.0 + 0.0j
    scale = 0.0
    for k, ak in enumerate(A):
        contrib = ak * ratio
        lhs += contrib
        scale = max(scale, abs(contrib))
        den = 1 - qab * q ** k
        if den == 0:
            raise PoleError("vanishing factor in coefficient ladder",
                            factor_index=k)
        ratio *= (1 - qa * q ** k) / den
    rhs = _rhs_factor(n, alpha, beta, mod) if m == n else 0.0
    return (lhs - rhs) / max(scale, 1e-300)


def norm_constant(n: int, alpha: complex, beta: complex,
                  mod: ModulusParameters) -> complex:
    """c_n = <1><alpha+beta> / (<alpha><beta>) * (norm factor)."""
    pref = (angle(mod, 1.0) * angle(mod, alpha + beta)
            / (angle(mod, alpha) * angle(mod, beta)))
    return pref * _rhs_factor(n, alpha, beta, mod)


@dataclass(frozen=True)
class OrthogonalityResult:
    numeric: complex          # contour integral of the weighted product
    termwise: complex         # q-Beta ladder applied coefficient by coefficient
    target: complex           # delta_{mn} c_n

    @property
    def defect(self) -> float:
        return abs(self.numeric - self.target)


def orthogonality_pair(m: int, n: int, alpha: complex, beta: complex,
                       mod: ModulusParameters,
                       tol: float = 1e-10) -> OrthogonalityResult:
    """The (m, n) entry of the Gram matrix, three ways.

    numeric: I(p_m p_n / (1-t), 1/(1-T)) under the weight
    t^alpha <z> / <z+beta>, which equals the displayed kernel because
    <z+1+1/omega> = <z> / ((1-t)(1-T)).
    """
    A = product_coeffs(little_jacobi(m, alpha - 1, beta - 1, mod),
                       little_jacobi(n, alpha - 1, beta - 1, mod))
    jp = JordanPochhammerWeight(mod, alpha, (beta,), (0.0,))
    phi = CocycleElement("q", numerator={k: a for k, a in enumerate(A)},
                         denom_factors=[DenomFactor(0.0, 1, "right")])
    phit = CocycleElement("Q", numerator={0: 1.0},
                          denom_factors=[DenomFactor(0.0, 1, "right")])
    numeric = pair(PairingProblem(jp, phi, phit, tol=tol)).value

    q = mod.q
    qa = torus_q(mod, alpha)
    qab = torus_q(mod, alpha + beta)
    ladder = 0.0 + 0.0j
    ratio = 1.0 + 0.0j
    for k, ak in enumerate(A):
        ladder += ak * ratio
        ratio *= (1 - qa * q ** k) / (1 - qab * q ** k)
    pref = (angle(mod, 1.0) * angle(mod, alpha + beta)
            / (angle(mod, alpha) * angle(mod, beta)))
    termwise = pref * ladder

    target = norm_constant(n, alpha, beta, mod) if m == n else 0.0 + 0.0j
    return OrthogonalityResult(numeric=numeric, termwise=termwise,
                               target=target)
