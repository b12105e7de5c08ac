"""Barnes-type q-hypergeometric function at |q| = 1.

    Psi(alpha, beta, gamma; x) =
        <alpha><beta> / (<1><gamma>) *
        Integral over a separating vertical line of
        q^{xz} <z+1+1/omega> <z+gamma> / (<z+alpha> <z+beta>) dz,

absolutely convergent for 0 < Re x < 1 + 1/omega + Re(gamma-alpha-beta).
The integrand is a Jordan-Pochhammer weight in the exponent variable x with
offset lists (alpha, beta | 1+1/omega, gamma), so the whole pairing layer
applies: Psi(...|phitilde) pairs the weight against a Q-side element.

This module provides the function itself, its contiguous (Heine) relations,
the second-order difference equation in x, the connection formula relating
x to 1+1/omega+gamma-alpha-beta-x, the terminating series that Psi
degenerates to as alpha -> -n, and the residue-corrected evaluation that
stays stable through that degeneration (the contour gets pinched there).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .cocycle import CocycleElement, DenomFactor, JordanPochhammerWeight
from .contour import ContourSpec
from .doublesine import angle, classify_lattice, residue_inverse_angle, sigma
from .errors import DivergenceError, DomainError, PoleError
from .pairing import PairingProblem, convergence_window, pair, phi_jp
from .qcore import ModulusParameters, poch, torus_q, torus_Q

__all__ = [
    "HGParams", "barnes_weight", "psi", "psi_with_cocycle",
    "difference_equation_residual", "heine_residuals", "connection_residual",
    "connection_decomposition", "phi_terminating", "psi_residue_corrected",
]

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class HGParams:
    mod: ModulusParameters
    alpha: complex
    beta: complex
    gamma: complex
    x: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "x"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def shifted(self, da=0, db=0, dg=0, dx=0) -> "HGParams":
        return HGParams(self.mod, self.alpha + da, self.beta + db,
                        self.gamma + dg, self.x + dx)

    @property
    def window(self):
        """Open interval of admissible Re x."""
        hi = (1 + 1.0 / self.mod.omega
              + (self.gamma - self.alpha - self.beta).real)
        return (0.0, hi)


def barnes_weight(par: HGParams) -> JordanPochhammerWeight:
    """The integrand of Psi as a Jordan-Pochhammer weight in x."""
    bigQ = 1 + 1.0 / par.mod.omega
    return JordanPochhammerWeight(par.mod, par.x, (par.alpha, par.beta),
                                  (bigQ, par.gamma))


def _prefactor(par: HGParams) -> complex:
    mod = par.mod
    return (angle(mod, par.alpha) * angle(mod, par.beta)
            / (angle(mod, 1.0) * angle(mod, par.gamma)))


def psi(par: HGParams, phitilde: CocycleElement | None = None,
        tol: float = 1e-10) -> complex:
    """Psi(alpha, beta, gamma; x | phitilde); phitilde=None means the bare
    function (the constant element 1)."""
    jp = barnes_weight(par)
    res = pair(PairingProblem(jp, None, phitilde, tol=tol))
    return _prefactor(par) * res.value


def psi_with_cocycle(par: HGParams, phitilde: CocycleElement,
                     tol: float = 1e-10) -> complex:
    """Alias for the generalized function Psi(...|phitilde)."""
    return psi(par, phitilde=phitilde, tol=tol)


def difference_equation_residual(par: HGParams,
                                 phitilde: CocycleElement | None = None,
                                 tol: float = 1e-10) -> complex:
    """Relative residual of

        {(1-D)(1-q^{gamma-1}D) - q^x (1-q^alpha D)(1-q^beta D)} Psi = 0,

    D the shift x -> x+1."""
    mod = par.mod
    v = {k: psi(par.shifted(dx=k), phitilde, tol) for k in (0, 1, 2)}
    qg = torus_q(mod, par.gamma - 1)
    qa = torus_q(mod, par.alpha)
    qb = torus_q(mod, par.beta)
    qx = torus_q(mod, par.x)
    lhs1 = v[0] - (1 + qg) * v[1] + qg * v[2]
    lhs2 = qx * (v[0] - (qa + qb) * v[1] + qa * qb * v[2])
    scale = max(abs(lhs1), abs(lhs2), max(abs(t) for t in v.values()), 1e-300)
    return (lhs1 - lhs2) / scale


def heine_residuals(par: HGParams, phitilde: CocycleElement | None = None,
                    tol: float = 1e-10):
    """Relative residuals of the three contiguous relations."""
    mod = par.mod
    a = torus_q(mod, par.alpha)
    b = torus_q(mod, par.beta)
    c = torus_q(mod, par.gamma)
    q = mod.q
    qx = torus_q(mod, par.x)

    def P(da, db, dg):
        return psi(par.shifted(da, db, dg), phitilde, tol)

    base = P(0, 0, 0)
    up = P(1, 1, 1)
    r1 = (P(0, 0, -1) - base
          - qx * c * (1 - a) * (1 - b) / ((q - c) * (1 - c)) * up)
    r2 = P(1, 0, 0) - base - qx * a * (1 - b) / (1 - c) * up
    r3 = (P(1, -1, 0) - base
          - qx / q * (a * q - b) / (1 - c) * P(1, 0, 1))
    scale = max(abs(base), abs(up), 1e-300)
    return (r1 / scale, r2 / scale, r3 / scale)


def _connection_half(par: HGParams, swap: bool, tol: float) -> complex:
    mod = par.mod
    al, be = (par.beta, par.alpha) if swap else (par.alpha, par.beta)
    ga, x = par.gamma, par.x
    xprime = 1 + 1.0 / mod.omega + ga - al - be - x
    coeff = (angle(mod, be) * angle(mod, ga - al)
             / (angle(mod, ga) * angle(mod, be - al))
             * sigma(mod, x + al) / sigma(mod, x))
    inner = HGParams(mod, al, 1 + al - ga, 1 + al - be, xprime)
    return coeff * psi(inner, tol=tol)


def connection_residual(par: HGParams, tol: float = 1e-10) -> complex:
    """Relative residual of the two-term connection formula in x."""
    lhs = psi(par, tol=tol)
    rhs = _connection_half(par, False, tol) + _connection_half(par, True, tol)
    return (lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def connection_decomposition(par: HGParams, tol: float = 1e-10):
    """Psi reassembled from the two partial-fraction homology classes

        (A-C)(1-BT)/((A-B)(1-CT)) + (B-C)(1-AT)/((B-A)(1-CT)) = 1

    under the integral sign.  Returns (sum_of_parts, psi_value)."""
    mod = par.mod
    A = torus_Q(mod, par.alpha)
    B = torus_Q(mod, par.beta)
    C = torus_Q(mod, par.gamma)
    if abs(A - B) < 1e-12:
        raise DomainError("alpha and beta coincide on the Q-torus; the "
                          "decomposition degenerates")
    jp = barnes_weight(par)
    pref = _prefactor(par)
    total = 0.0 + 0.0j
    for (u, v) in ((A, B), (B, A)):
        kappa = (u - C) / (u - B if u is A else u - A)
        el = CocycleElement("Q", numerator={0: kappa, 1: -kappa * v},
                            denom_factors=[DenomFactor(par.gamma, 1, "right")])
        total += pref * pair(PairingProblem(jp, None, el, tol=tol)).value
    return total, psi(par, tol=tol)


def phi_terminating(n: int, beta: complex, gamma: complex, x: complex,
                    mod: ModulusParameters) -> complex:
    """The terminating series phi(q^{-n}, q^beta, q^gamma; q^x):

        sum_{k=0}^{n} q^{kx} prod_{j=0}^{k-1}
            (1-q^{j-n})(1-q^{beta+j}) / ((1-q^{j+1})(1-q^{gamma+j})).
    """
    if n < 0 or n != int(n):
        raise DomainError("series terminates only for integer n >= 0")
    q = mod.q
    b = torus_q(mod, beta)
    c = torus_q(mod, gamma)
    t = torus_q(mod, x)
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    for j in range(int(n)):
        den = (1 - q ** (j + 1)) * (1 - c * q ** j)
        if den == 0:
            raise PoleError("vanishing Pochhammer factor in terminating "
                            "series", factor_index=j)
        term *= (1 - q ** (j - n)) * (1 - b * q ** j) / den * t
        total += term
    return total


def _bare_integrand(par: HGParams):
    jp = barnes_weight(par)

    def f(zs):
        import numpy as np
        out = np.empty(len(zs), dtype=complex)
        for i, z in enumerate(zs):
            out[i] = phi_jp(jp, complex(z))
        return out

    return f


def _left_lattice_extractions(par: HGParams, n: int, rho: float):
    """Left-family poles with real part right of rho, other than the pinch
    cluster -alpha, ..., -alpha-n itself."""
    mod = par.mod
    w = 1.0 / mod.omega
    points = []
    for base, base_name in ((par.alpha, "alpha"), (par.beta, "beta")):
        kmax = int(math.ceil((-base.real) - rho)) + 1
        for k in range(0, max(kmax, 0) + 1):
            for j in range(0, max(int(math.ceil(((-base.real) - k - rho) / w)) + 1, 0)):
                if base_name == "alpha" and j == 0 and k <= n:
                    continue  # the pinch cluster is handled separately
                z0 = -base - k - j * w
                if z0.real > rho:
                    points.append((base_name, k, j, z0))
    return points


def psi_residue_corrected(par: HGParams, n: int, tol: float = 1e-10) -> complex:
    """Psi evaluated stably for alpha near (or exactly at) -n.

    There the contour is pinched between the descending poles -alpha-k and
    the ascending integer lattice.  The k = 0..n cluster residues are
    extracted with the exact cancellation

        <alpha><1+1/omega-alpha-k> = sigma(alpha+k) (q^alpha; q)_k,

    which stays finite through the degeneration; every other left-family
    pole right of the shifted line is extracted as an ordinary residue and
    the remaining integral is carried along that line.  At alpha = -n the
    <alpha>-weighted remainder vanishes identically and is skipped.
    """
    mod = par.mod
    w = 1.0 / mod.omega
    al, be, ga, x = par.alpha, par.beta, par.gamma, par.x
    lo, hi = par.window
    if not (lo < x.real < hi):
        raise DivergenceError(
            f"Re(x)={x.real:.6g} outside window ({lo:.6g}, {hi:.6g})")
    if abs(al + n) > 0.45:
        raise DomainError(f"alpha={al} is not within reach of -n={-n}")

    # pinch-cluster part, finite uniformly in alpha near -n
    pref_reduced = angle(mod, be) / (angle(mod, 1.0) * angle(mod, ga))
    cluster = 0.0 + 0.0j
    qa = torus_q(mod, al)
    for k in range(n + 1):
        rk = residue_inverse_angle(mod, k, 0)
        cluster += (TWO_PI_I * torus_q(mod, -x * (al + k))
                    * sigma(mod, al + k) * poch(qa, mod.q, k)
                    * angle(mod, ga - al - k) / angle(mod, be - al - k) * rk)
    value = pref_reduced * cluster

    at_exact = classify_lattice(mod, al).kind == "zero"
    if at_exact:
        return value

    # remainder: ordinary residues right of the shifted line plus the
    # regular integral, all weighted by <alpha> (vanishing at the pinch)
    rho = min(0.0, (-al).real - n) - 0.25 * min(1.0, w)
    jp = barnes_weight(par)
    extra = 0.0 + 0.0j
    for base_name, k, j, z0 in _left_lattice_extractions(par, n, rho):
        if base_name == "alpha":
            r = residue_inverse_angle(mod, k, j)
            reg = (torus_q(mod, x * z0) * angle(mod, z0 + 1 + w)
                   * angle(mod, z0 + ga) / angle(mod, z0 + be))
        else:
            r = residue_inverse_angle(mod, k, j)
            reg = (torus_q(mod, x * z0) * angle(mod, z0 + 1 + w)
                   * angle(mod, z0 + ga) / angle(mod, z0 + al))
        extra += TWO_PI_I * reg * r
    from .contour import integrate_vertical
    spec = ContourSpec(rho=rho, panel_tol=min(1e-12, tol * 1e-2))
    regular = integrate_vertical(_bare_integrand(par), spec, tol=tol).value
    value += _prefactor(par) * (extra + regular)
    return value
