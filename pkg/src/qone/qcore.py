"""Modulus parameters, torus maps, the finite q-Pochhammer symbol, and
lattice helpers shared by all modules.

The deformation parameters are q = e^{2*pi*i*omega} and Q = e^{2*pi*i/omega}
with omega > 0 real, so |q| = |Q| = 1.  All complex powers of the form
t^alpha, q^{x z} are defined through exp(2*pi*i*omega * product) -- single
valued, never via a log branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PoleError

TWO_PI_I = 2j * math.pi

#: Denominator bound and distance used for the root-of-unity proximity check.
RATIONAL_DENOM_MAX = 50
RATIONAL_DIST = 1e-6


@dataclass(frozen=True)
class ModulusParameters:
    """The modular pair: omega, q = e^{2*pi*i*omega}, Q = e^{2*pi*i/omega}.

    rational_proximity_warning is set when omega is within 1e-6 of a
    rational p/s with s <= 50; near roots of unity the left/right pole
    lattices nearly collide and quadrature is unreliable.
    """

    omega: float
    q: complex
    Qbig: complex
    rational_proximity_warning: bool = False

    @property
    def inv_omega(self) -> float:
        return 1.0 / self.omega

    @property
    def strip_width(self) -> float:
        """Width 1 + 1/omega of the fundamental strip (= the reflection point
        doubled)."""
        return 1.0 + 1.0 / self.omega


@dataclass(frozen=True)
class LatticePoint:
    """A point m + n/omega of the two-index lattice indexing zeros/poles."""

    m: int
    n: int
    value: complex

    @staticmethod
    def make(mod: ModulusParameters, m: int, n: int) -> "LatticePoint":
        return LatticePoint(m, n, complex(m + n / mod.omega))


def _near_rational(x: float, max_den: int = RATIONAL_DENOM_MAX,
                   dist: float = RATIONAL_DIST) -> bool:
    frac = Fraction(x).limit_denominator(max_den)
    return abs(x - float(frac)) < dist


def make_modulus(omega: float) -> ModulusParameters:
    """Build the modulus record for omega > 0."""
    omega = float(omega)
    if not math.isfinite(omega) or omega <= 0.0:
        raise DomainError(f"omega must be a positive finite real, got {omega!r}")
    q = cmath.exp(TWO_PI_I * omega)
    Qbig = cmath.exp(TWO_PI_I / omega)
    return ModulusParameters(
        omega=omega, q=q, Qbig=Qbig,
        rational_proximity_warning=_near_rational(omega),
    )


def torus_q(mod: ModulusParameters, gamma: complex) -> complex:
    """exp(2*pi*i*omega*gamma); maps an exponent to the q-torus (c = q^gamma)."""
    gamma = complex(gamma)
    if not (math.isfinite(gamma.real) and math.isfinite(gamma.imag)):
        raise DomainError(f"non-finite exponent {gamma!r}")
    return cmath.exp(TWO_PI_I * mod.omega * gamma)


def torus_Q(mod: ModulusParameters, gamma: complex) -> complex:
    """exp(2*pi*i*gamma); maps an exponent to the Q-torus (C = Q^{omega*gamma})."""
    gamma = complex(gamma)
    if not (math.isfinite(gamma.real) and math.isfinite(gamma.imag)):
        raise DomainError(f"non-finite exponent {gamma!r}")
    return cmath.exp(TWO_PI_I * gamma)


def poch(x: complex, base: complex, n: int) -> complex:
    """Finite Pochhammer symbol (x; base)_n.

    n >= 0: prod_{j=0}^{n-1} (1 - x*base^j)
    n <  0: prod_{j=1}^{-n} (1 - x*base^{-j})^{-1}
    """
    n = int(n)
    out = 1.0 + 0.0j
    if n >= 0:
        f = complex(x)
        for _ in range(n):
            out *= (1.0 - f)
            f *= base
    else:
        binv = 1.0 / base
        f = complex(x)
        for j in range(1, -n + 1):
            f *= binv
            d = 1.0 - f
            if d == 0:
                raise PoleError(f"(x; q)_n factor 1 - x*base^-{j} vanishes",
                                factor_index=j)
            out /= d
    return out


def lattice_extrema(anchors):
    """Extremal real parts of the left/right pole families.

    `anchors` is an iterable of (complex anchor, sign) where sign is
    'left' (family recedes toward -infinity from the anchor) or 'right'
    (recedes toward +infinity).  Returns (left_max_re, right_min_re);
    an empty side yields -inf / +inf respectively.
    """
    left_max = -math.inf
    right_min = math.inf
    for anchor, sign in anchors:
        re = complex(anchor).real
        if sign == "left":
            left_max = max(left_max, re)
        elif sign == "right":
            right_min = min(right_min, re)
        else:
            raise DomainError(f"anchor sign must be 'left' or 'right', got {sign!r}")
    return (left_max, right_min)
