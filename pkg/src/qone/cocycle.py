"""The rational-function layer over the two tori.

Elements live on the q-side (variable t = e^{2 pi i omega z}) or the Q-side
(variable T = e^{2 pi i z}).  An element is a finite sum of terms, each a
Laurent polynomial over a product of finite Pochhammer chains:

    term(v) = sum_k num[k] v^k / prod_f chain_f(v),
    chain (right):  (c v; base)_ell          with c  = torus(anchor)
    chain (left):   (c base^-ell v; base)_ell

Sums arise from the coboundary construction psi(t) - b_chi(t) psi(q^chi t):
keeping the terms separate keeps every denominator squarefree, which the
pairing's pole bookkeeping relies on.

The multiplier system b_chi(t) = Phi(z + chi)/Phi(z) of the Jordan-Pochhammer
weight Phi(z) = t^alpha prod <z + gamma'_j>/<z + gamma_j> factors as
q^{chi alpha} b_chi^+(t) / b_chi^-(t) with polynomial numerator/denominator;
its Q-side mirror uses steps of 1/omega.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

from .errors import DegenerateInputError, DomainError, PoleError
from .qcore import ModulusParameters, poch, torus_q, torus_Q

__all__ = [
    "DenomFactor", "CocycleTerm", "CocycleElement", "JordanPochhammerWeight",
    "eval_element", "b_chi", "b_tilde_chi", "coboundary_generator",
    "identity23_residual", "basis_elements", "constant_element",
    "monomial_element", "BChi",
]


@dataclass(frozen=True)
class DenomFactor:
    """One Pochhammer chain in a denominator."""

    anchor: complex          # exponent; the torus value is torus(anchor)
    ell: int                 # chain length (>= 1)
    orientation: str         # 'left' or 'right'

    def linear_anchors(self, step: float = 1.0):
        """Exponent anchors of the individual linear factors (1 - torus(a) v).

        `step` is the exponent increment per chain index: 1 on the q side,
        1/omega on the Q side (the chain multiplies torus values by the base).
        """
        if self.orientation == "right":
            return [self.anchor + i * step for i in range(self.ell)]
        return [self.anchor - i * step for i in range(1, self.ell + 1)]


@dataclass(frozen=True)
class CocycleTerm:
    numerator: tuple          # tuple of (int exponent, complex coeff)
    denom_factors: tuple      # tuple of DenomFactor

    def num_dict(self):
        return dict(self.numerator)


def _as_num_tuple(num) -> tuple:
    if isinstance(num, dict):
        items = [(int(k), complex(v)) for k, v in num.items() if v != 0]
    else:
        items = [(int(k), complex(v)) for k, v in num if v != 0]
    if not items:
        items = [(0, 0.0 + 0.0j)]
    return tuple(sorted(items))


class CocycleElement:
    """A (sum of) rational function(s) of the torus variable.

    Single-term elements behave like the plain numerator/denominator record;
    `terms` exposes the general form.
    """

    __slots__ = ("side", "terms")

    def __init__(self, side: str, numerator=None, denom_factors=(), terms=None):
        if side not in ("q", "Q"):
            raise DomainError(f"side must be 'q' or 'Q', got {side!r}")
        self.side = side
        if terms is not None:
            self.terms = tuple(terms)
        else:
            self.terms = (CocycleTerm(_as_num_tuple(numerator if numerator is not None else {0: 1.0}),
                                      tuple(denom_factors)),)

    @property
    def numerator(self):
        if len(self.terms) != 1:
            raise DomainError("multi-term element has no single numerator")
        return self.terms[0].num_dict()

    @property
    def denom_factors(self):
        if len(self.terms) != 1:
            raise DomainError("multi-term element has no single denominator")
        return self.terms[0].denom_factors

    def scaled(self, c: complex) -> "CocycleElement":
        return CocycleElement(self.side, terms=[
            CocycleTerm(tuple((k, c * v) for k, v in t.numerator), t.denom_factors)
            for t in self.terms])

    def plus(self, other: "CocycleElement") -> "CocycleElement":
        if other.side != self.side:
            raise DomainError("cannot add elements on different sides")
        return CocycleElement(self.side, terms=self.terms + other.terms)

    def eval_at_var(self, mod: ModulusParameters, v: complex) -> complex:
        base = mod.q if self.side == "q" else mod.Qbig
        torus = torus_q if self.side == "q" else torus_Q
        total = 0.0 + 0.0j
        if abs(v) > 1e40:
            # Far from the real axis the torus variable explodes; keep only
            # the leading power of each polynomial (relative error ~ 1/|v|)
            # so num/den never overflows en route.  A positive net power is
            # allowed — the weight's decay dominates inside the convergence
            # window — but its magnitude is clamped so the later product
            # with the (tiny) weight stays finite; the clamp only touches
            # tail points whose true integrand is below any tolerance.
            for term in self.terms:
                kmax, cmax = max(((k, c) for k, c in term.numerator if c != 0),
                                 default=(0, 0.0 + 0.0j))
                if cmax == 0:
                    continue
                lg = cmath.log(cmax) + kmax * cmath.log(v)
                for f in term.denom_factors:
                    c0 = torus(mod, f.anchor)
                    ell = f.ell
                    if f.orientation == "right":
                        lead = (-c0) ** ell * base ** (ell * (ell - 1) // 2)
                    else:
                        lead = (-c0) ** ell * base ** (-ell * (ell + 1) // 2)
                    lg -= cmath.log(lead) + ell * cmath.log(v)
                if lg.real > 600.0:
                    lg = complex(600.0, lg.imag)
                total += cmath.exp(lg)
            return total
        for term in self.terms:
            num = sum(c * v ** k for k, c in term.numerator)
            den = 1.0 + 0.0j
            for idx, f in enumerate(term.denom_factors):
                c0 = torus(mod, f.anchor)
                if f.orientation == "right":
                    d = poch(c0 * v, base, f.ell)
                else:
                    d = poch(c0 * base ** (-f.ell) * v, base, f.ell)
                if d == 0:
                    raise PoleError("denominator chain vanishes",
                                    factor_index=idx)
                den *= d
            total += num / den
        return total

    def __repr__(self):
        return f"CocycleElement(side={self.side!r}, terms={self.terms!r})"


def constant_element(side: str, value: complex = 1.0) -> CocycleElement:
    return CocycleElement(side, numerator={0: value})


def monomial_element(side: str, k: int, value: complex = 1.0) -> CocycleElement:
    return CocycleElement(side, numerator={int(k): value})


def eval_element(e: CocycleElement, mod: ModulusParameters, z: complex) -> complex:
    """Evaluate the element at the contour point z (via its torus variable)."""
    v = torus_q(mod, z) if e.side == "q" else torus_Q(mod, z)
    return e.eval_at_var(mod, v)


@dataclass(frozen=True)
class JordanPochhammerWeight:
    """The data (alpha; gamma_1..gamma_n; gamma'_1..gamma'_n) of
    Phi(z) = t^alpha prod_j <z + gamma'_j> / <z + gamma_j>.

    The two offset lists may have different lengths (the Barnes kernel is
    built from the general product form).
    """

    mod: ModulusParameters
    alpha: complex
    gammas: tuple
    gamma_primes: tuple

    def __init__(self, mod, alpha, gammas, gamma_primes):
        object.__setattr__(self, "mod", mod)
        object.__setattr__(self, "alpha", complex(alpha))
        object.__setattr__(self, "gammas", tuple(complex(g) for g in gammas))
        object.__setattr__(self, "gamma_primes",
                           tuple(complex(g) for g in gamma_primes))

    @property
    def n(self) -> int:
        return len(self.gammas)


# -- polynomial helpers ------------------------------------------------------


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for k1, c1 in p.items():
        for k2, c2 in q.items():
            k = k1 + k2
            out[k] = out.get(k, 0.0 + 0.0j) + c1 * c2
    return out


def _chain_poly(c0: complex, base: complex, ell: int) -> dict:
    """Expanded coefficients of prod_{i=0}^{ell-1} (1 - c0 base^i v)."""
    p = {0: 1.0 + 0.0j}
    c = complex(c0)
    for _ in range(ell):
        p = _poly_mul(p, {0: 1.0, 1: -c})
        c *= base
    return p


@dataclass(frozen=True)
class BChi:
    """b_chi with its factorization: b_chi(v) = prefactor * plus(v)/minus(v)."""

    side: str
    chi: int
    prefactor: complex
    plus_coeffs: tuple       # polynomial b^+ as ((k, c), ...)
    minus_coeffs: tuple      # polynomial b^-
    minus_factors: tuple     # the b^- denominator as DenomFactor records
    element: CocycleElement  # prefactor*b^+ over the b^- chains

    def __call__(self, v: complex) -> complex:
        num = sum(c * v ** k for k, c in self.plus_coeffs)
        den = sum(c * v ** k for k, c in self.minus_coeffs)
        if den == 0:
            raise PoleError("b_chi denominator vanishes at this point")
        return self.prefactor * num / den


def _b_chi_generic(jp: JordanPochhammerWeight, chi: int, side: str) -> BChi:
    mod = jp.mod
    chi = int(chi)
    if side == "q":
        base = mod.q
        torus = torus_q
        pref = torus_q(mod, chi * jp.alpha)
        step = 1
    else:
        base = mod.Qbig
        torus = torus_Q
        pref = torus_Q(mod, chi * jp.alpha)  # = e^{2 pi i alpha chi}
        step = 1  # anchors shift by integer chain indices on either torus
    plus = {0: 1.0 + 0.0j}
    minus = {0: 1.0 + 0.0j}
    factors = []
    if chi >= 0:
        for g in jp.gammas:
            plus = _poly_mul(plus, _chain_poly(torus(mod, g), base, chi))
        for g in jp.gamma_primes:
            minus = _poly_mul(minus, _chain_poly(torus(mod, g), base, chi))
            if chi > 0:
                factors.append(DenomFactor(g, chi, "right"))
    else:
        kappa = -chi
        binv = 1.0 / base
        for g in jp.gamma_primes:
            plus = _poly_mul(plus, _chain_poly(torus(mod, g) * binv ** kappa,
                                               base, kappa))
        for g in jp.gammas:
            minus = _poly_mul(minus, _chain_poly(torus(mod, g) * binv ** kappa,
                                                 base, kappa))
            factors.append(DenomFactor(g, kappa, "left"))
    # genericity: shared roots of b^+/b^- show up as (nearly) equal linear
    # anchors of the two products
    _warn_shared_roots(jp, chi)
    num = {k: pref * c for k, c in plus.items()}
    element = CocycleElement(side, numerator=num, denom_factors=factors)
    return BChi(side=side, chi=chi, prefactor=pref,
                plus_coeffs=_as_num_tuple(plus), minus_coeffs=_as_num_tuple(minus),
                minus_factors=tuple(factors), element=element)


def _warn_shared_roots(jp: JordanPochhammerWeight, chi: int) -> None:
    if chi == 0:
        return
    rng = range(abs(chi))
    for g in jp.gammas:
        for gp in jp.gamma_primes:
            d = g - gp
            for i in rng:
                for k in rng:
                    if abs(d - (k - i)) < 1e-12:
                        warnings.warn(
                            f"b_chi factors share a root: gamma={g}, "
                            f"gamma'={gp}, chi={chi}", stacklevel=3)
                        return


def b_chi(jp: JordanPochhammerWeight, chi: int) -> BChi:
    """b_chi(t) = Phi(z + chi)/Phi(z) with its (prefactor, b^+, b^-) split."""
    return _b_chi_generic(jp, chi, "q")


def b_tilde_chi(jp: JordanPochhammerWeight, chi: int) -> BChi:
    """The Q-side mirror: Phi(z + chi/omega)/Phi(z) in the variable T."""
    return _b_chi_generic(jp, chi, "Q")


def coboundary_generator(e: CocycleElement, jp: JordanPochhammerWeight,
                         chi: int) -> CocycleElement:
    """psi(v) - b_chi(v) psi(base^chi v), the generic coboundary element.

    Works on either side; the side of `e` selects b_chi or its mirror.
    Returned as a two-group sum so each term keeps a squarefree denominator.
    """
    chi = int(chi)
    mod = jp.mod
    base = mod.q if e.side == "q" else mod.Qbig
    step = 1.0 if e.side == "q" else 1.0 / mod.omega
    b = b_chi(jp, chi) if e.side == "q" else b_tilde_chi(jp, chi)
    shifted_terms = []
    bshift = base ** chi
    bplus = dict(b.plus_coeffs)
    for term in e.terms:
        # psi(base^chi v): monomial v^k gains base^{chi k}; chain anchors
        # shift by chi steps (1 on the q side, 1/omega on the Q side)
        num = {k: c * bshift ** k for k, c in term.numerator}
        num = _poly_mul(num, {k: -b.prefactor * c for k, c in bplus.items()})
        dens = tuple(DenomFactor(f.anchor + chi * step, f.ell, f.orientation)
                     for f in term.denom_factors) + b.minus_factors
        shifted_terms.append(CocycleTerm(_as_num_tuple(num), dens))
    return CocycleElement(e.side, terms=e.terms + tuple(shifted_terms))


def identity23_residual(A: complex, B: complex, C: complex, T: complex) -> complex:
    """LHS - 1 of the two-term partial-fraction identity

        (A-C)(1-BT)/((A-B)(1-CT)) + (B-C)(1-AT)/((B-A)(1-CT)) = 1.
    """
    A, B, C, T = complex(A), complex(B), complex(C), complex(T)
    if abs(A - B) <= 1e-14 * max(abs(A), abs(B), 1.0):
        raise DegenerateInputError("A = B makes both terms undefined")
    if abs(1.0 - C * T) <= 1e-14:
        raise DegenerateInputError("C*T = 1 puts the common denominator at zero")
    lhs = ((A - C) * (1 - B * T) / ((A - B) * (1 - C * T))
           + (B - C) * (1 - A * T) / ((B - A) * (1 - C * T)))
    return lhs - 1.0


def basis_elements(jp: JordanPochhammerWeight):
    """The n q-side elements 1/(1 - c'_j t) and their Q-side mirrors."""
    if jp.n < 1 or len(jp.gamma_primes) != jp.n:
        raise DomainError("basis construction needs equal-length offset lists "
                          "with n >= 1")
    q_side = [CocycleElement("q", numerator={0: 1.0},
                             denom_factors=[DenomFactor(g, 1, "right")])
              for g in jp.gamma_primes]
    Q_side = [CocycleElement("Q", numerator={0: 1.0},
                             denom_factors=[DenomFactor(g, 1, "right")])
              for g in jp.gamma_primes]
    return q_side, Q_side
