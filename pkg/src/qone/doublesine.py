"""The angle bracket function <x> and its exponential companion sigma(x).

<x> = exp((pi*i/2)((1+omega)x - omega x^2)) * S2(x | 1, 1/omega) replaces the
infinite q-product when |q| = 1.  It is entire with zeros on the lattice
{m + n/omega : m, n <= 0}; its reciprocal has poles on {m + n/omega : m, n >= 1}.
Contracted behavior (the contract is the identity set, not the formulas):

    <x+1>       = <x> / (1 - e^{2 pi i omega x})        (step 1)
    <x + 1/omega> = <x> / (1 - e^{2 pi i x})            (step 1/omega)
    <x><1 + 1/omega - x> = sigma(x)                     (reflection)
    <1> = i/sqrt(omega)

Evaluation strategy:
  * inside a unit-width window centered on the reflection point, log S2 is
    computed by quadrature of the classical integral representation
        log S2(x) = -int_0^inf [ sinh(a t) / (2 t sinh(t/2) sinh(b t))
                                 - (a/b)/t^2 ] dt + (a/b)/T_tail,
    a = (1 + 1/omega - 2x)/2,  b = 1/(2 omega),
    with an even Taylor patch near t = 0 (the two terms cancel to O(t^0))
    and the analytic tail of the 1/t^2 subtraction added back;
  * elsewhere in the strip the argument is reduced into the window by the
    step-1 (or step-1/omega when omega > 1) shift relation;
  * for large |Im x| the convergent expansion
        log <x> = i(pi/4 + pi(omega + 1/omega)/12)
                  + sum_{k>=1} e^{2 pi i k omega x} / (k (e^{2 pi i k omega} - 1))
                  + sum_{k>=1} e^{2 pi i k x} / (k (e^{2 pi i k / omega} - 1))
    is used directly (Im x -> +inf) or through the reflection identity
    (Im x -> -inf).  Its terms carry small divisors when omega is near a
    rational number, which is what the modulus record's proximity warning
    guards against.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DivergenceError, DomainError, PoleError
from .qcore import LatticePoint, ModulusParameters, TWO_PI_I, make_modulus

__all__ = [
    "sigma", "angle", "log_angle", "classify_lattice",
    "residue_inverse_angle",
    "AngleEvaluator", "LatticeClassification", "get_evaluator",
]

#: default distance below which an argument counts as sitting on the lattice
LATTICE_TOL = 1e-9


def sigma(mod: ModulusParameters, x: complex) -> complex:
    """sigma(x) = exp(pi*i*((1+omega)x - omega x^2)); entire, nonvanishing."""
    x = complex(x)
    w = mod.omega
    return cmath.exp(1j * math.pi * ((1.0 + w) * x - w * x * x))


def _half_sigma(mod: ModulusParameters, x: complex) -> complex:
    """The square root branch exp((pi*i/2)((1+omega)x - omega x^2)) used as the
    prefactor of S2 inside the angle bracket."""
    x = complex(x)
    w = mod.omega
    return cmath.exp(0.5j * math.pi * ((1.0 + w) * x - w * x * x))


class LatticeClassification:
    """Result of the zero/pole lattice proximity test."""

    __slots__ = ("kind", "point", "distance")

    def __init__(self, kind: str, point, distance: float):
        self.kind = kind          # 'regular' | 'zero' | 'pole'
        self.point = point        # LatticePoint or None
        self.distance = distance

    def __repr__(self):
        return f"LatticeClassification({self.kind!r}, {self.point!r}, {self.distance!r})"


def _nearest_in_quadrant(mod: ModulusParameters, x: complex, lo_m: bool, lo_n: bool):
    """Nearest lattice point m + n/omega with (m, n) restricted to one
    quadrant: lo entries <= 0, hi entries >= 1."""
    w = mod.omega
    r = x.real
    best = None
    # candidate n values near omega*(r - m); scan enough of them that the
    # true minimizer is included for any r in the range we ever evaluate
    n_center = w * r
    span = int(math.ceil(abs(n_center))) + 2
    for dn in range(-span, span + 1):
        n = int(round(n_center)) + dn
        n = min(n, 0) if lo_n else max(n, 1)
        m_real = r - n / w
        m = int(round(m_real))
        m = min(m, 0) if lo_m else max(m, 1)
        for mm in (m - 1, m, m + 1):
            mm2 = min(mm, 0) if lo_m else max(mm, 1)
            d = abs(x - (mm2 + n / w))
            if best is None or d < best[0]:
                best = (d, mm2, n)
    return best


def classify_lattice(mod: ModulusParameters, x: complex,
                     tol: float = LATTICE_TOL) -> LatticeClassification:
    """Classify x against the zero lattice {m+n/omega : m,n <= 0} and the
    pole lattice {m+n/omega : m,n >= 1}."""
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    x = complex(x)
    dz = _nearest_in_quadrant(mod, x, lo_m=True, lo_n=True)
    dp = _nearest_in_quadrant(mod, x, lo_m=False, lo_n=False)
    d, m, n = min(dz, dp)
    if d < tol:
        kind = "zero" if (m <= 0 and n <= 0) else "pole"
        return LatticeClassification(kind, LatticePoint.make(mod, m, n), d)
    return LatticeClassification("regular", None, d)


# ---------------------------------------------------------------------------
# Taylor coefficients of the patched integrand
#     g(t) = sinh(a t)/(2 t sinh(t/2) sinh(b t)) - (a/b)/t^2
# around t = 0 (even series; derived symbolically, verified against the
# direct formula at moderate t).


def _g_taylor_coeffs(a: complex, b: float):
    a2 = a * a
    b2 = b * b
    c0 = a * (4*a2 - 4*b2 - 1) / (24*b)
    c2 = a * (48*a2**2 - 160*a2*b2 - 40*a2 + 112*b2**2 + 40*b2 + 7) / (5760*b)
    c4 = a * (192*a2**3 - 1344*a2**2*b2 - 336*a2**2 + 3136*a2*b2**2
              + 1120*a2*b2 + 196*a2 - 1984*b2**3 - 784*b2**2 - 196*b2
              - 31) / (967680*b)
    c6 = a * (1280*a2**4 - 15360*a2**3*b2 - 3840*a2**3 + 75264*a2**2*b2**2
              + 26880*a2**2*b2 + 4704*a2**2 - 158720*a2*b2**3
              - 62720*a2*b2**2 - 15680*a2*b2 - 2480*a2 + 97536*b2**4
              + 39680*b2**3 + 10976*b2**2 + 2480*b2 + 381) / (464486400*b)
    c8 = a * (3072*a2**5 - 56320*a2**4*b2 - 14080*a2**4 + 473088*a2**3*b2**2
              + 168960*a2**3*b2 + 29568*a2**3 - 2095104*a2**2*b2**3
              - 827904*a2**2*b2**2 - 206976*a2**2*b2 - 32736*a2**2
              + 4291584*a2*b2**4 + 1745920*a2*b2**3 + 482944*a2*b2**2
              + 109120*a2*b2 + 16764*a2 - 2616320*b2**5 - 1072896*b2**4
              - 305536*b2**3 - 76384*b2**2 - 16764*b2
              - 2555) / (122624409600*b)
    return (c0, c2, c4, c6, c8)


class AngleEvaluator:
    """Evaluator for <x> at a fixed modulus.

    Pure after construction; the value cache is an append-only memo keyed by
    the exact complex argument, so results are deterministic and thread-safe
    in the CPython sense.
    """

    #: Gauss-Legendre rule order per quadrature panel
    _GL_N = 16
    #: panel length on the t axis
    _PANEL = 0.5

    def __init__(self, mod: ModulusParameters, quad_tol: float = 1e-12,
                 ray_rotation_cap: float = 1.0, series_kmax: int = 400):
        self.mod = mod
        self.strip_lo = 0.0
        self.strip_hi = mod.strip_width
        self.quad_tol = quad_tol
        # bounds the hybrid routing threshold: the quadrature branch is only
        # used while the integrand's oscillation stays resolvable, everything
        # beyond goes to the large-|Im| expansion
        self.ray_rotation_cap = ray_rotation_cap
        w = mod.omega
        self._b = 0.5 / w
        self._center = 0.5 * mod.strip_width
        self._step = 1.0 if w <= 1.0 else 1.0 / w
        self._decay = min(0.5, self._b)
        self._t_tail = 42.0 / self._decay
        # large-|Im| expansion: threshold and precomputed divisors
        self._series_ymin = max(1.0, 0.37 / w) * max(1.0, ray_rotation_cap)
        ks = np.arange(1, series_kmax + 1)
        with np.errstate(over="ignore", invalid="ignore"):
            dq = ks * (np.exp(TWO_PI_I * w * ks) - 1.0)
            dQ = ks * (np.exp(TWO_PI_I / w * ks) - 1.0)
        self._series_inv_dq = 1.0 / dq
        self._series_inv_dQ = 1.0 / dQ
        self._series_kmax = series_kmax
        self._delta = 1j * (math.pi / 4.0 + math.pi * (w + 1.0 / w) / 12.0)
        # reference Gauss-Legendre nodes on [0, 1]
        xg, wg = np.polynomial.legendre.leggauss(self._GL_N)
        self._gl_x = 0.5 * (xg + 1.0)
        self._gl_w = 0.5 * wg
        self._cache: dict[complex, complex] = {}

    # -- strip quadrature --------------------------------------------------

    def _log_s2(self, x: complex) -> complex:
        """log S2(x | 1, 1/omega) for x inside the reduced window."""
        b = self._b
        a = 0.5 * (self.mod.strip_width - 2.0 * x)
        # Taylor patch below tc, panels of fixed length above, analytic tail
        tc = min(0.3, 0.6 / max(1.0, b, abs(a)))
        c0, c2, c4, c6, c8 = _g_taylor_coeffs(a, b)
        tc2 = tc * tc
        head = tc * (c0 + tc2 * (c2 / 3 + tc2 * (c4 / 5 + tc2 * (c6 / 7 + tc2 * c8 / 9))))
        T = self._t_tail
        n_panels = int(math.ceil((T - tc) / self._PANEL))
        edges = tc + (T - tc) / n_panels * np.arange(n_panels + 1)
        t = (edges[:-1, None] + np.diff(edges)[:, None] * self._gl_x[None, :]).ravel()
        wts = (np.diff(edges)[:, None] * self._gl_w[None, :]).ravel()
        h = 0.5 + b
        # overflow-free form of sinh(a t)/(2 t sinh(t/2) sinh(b t))
        num = np.exp((a - h) * t) - np.exp((-a - h) * t)
        den = t * (1.0 - np.exp(-t)) * (1.0 - np.exp(-2.0 * b * t))
        g = num / den - (a / b) / (t * t)
        body = np.dot(wts, g)
        return -(head + body) + (a / b) / T

    def _window_value(self, x: complex) -> complex:
        return self._half_sigma(x) * cmath.exp(self._log_s2(x))

    def _half_sigma(self, x: complex) -> complex:
        return _half_sigma(self.mod, x)

    # -- large |Im x| expansion ---------------------------------------------

    def _log_angle_series(self, x: complex) -> complex:
        """log <x> for Im x comfortably positive."""
        w = self.mod.omega
        ratio = math.exp(-2.0 * math.pi * min(w, 1.0) * x.imag)
        if ratio > 0.5:  # pragma: no cover - guarded by the caller
            raise DomainError("expansion requested below its validity height")
        if ratio == 0.0:
            kmax = 4
        else:
            kmax = min(self._series_kmax,
                       max(4, int(math.ceil(-41.0 / math.log(ratio)))) + 2)
        ks = np.arange(1, kmax + 1)
        u = np.exp(TWO_PI_I * w * x * ks)
        v = np.exp(TWO_PI_I * x * ks)
        terms = u * self._series_inv_dq[:kmax] + v * self._series_inv_dQ[:kmax]
        if not np.all(np.isfinite(terms)):
            raise DivergenceError(
                "large-Im expansion hit a vanishing divisor; omega is too "
                "close to a rational number for this route")
        return self._delta + complex(np.sum(terms[::-1]))

    # -- public entry --------------------------------------------------------

    def value(self, x: complex, tol: float = LATTICE_TOL) -> complex:
        x = complex(x)
        hit = self._cache.get(x)
        if hit is not None:
            return hit
        cls = classify_lattice(self.mod, x, tol)
        if cls.kind == "zero":
            v = 0.0 + 0.0j
        elif cls.kind == "pole":
            raise PoleError(f"<x> has a pole at {cls.point.value:g}; "
                            f"argument {x!r} is within {cls.distance:.2e}",
                            point=cls.point)
        elif x.imag >= self._series_ymin:
            v = cmath.exp(self._log_angle_series(x))
        elif x.imag <= -self._series_ymin:
            # reflection: <x> = sigma(x)/<1 + 1/omega - x>
            y = self.mod.strip_width - x
            v = sigma(self.mod, x) / cmath.exp(self._log_angle_series(y))
        else:
            w = self.mod.omega
            step = self._step
            lo = self._center - 0.5 * step
            hi = self._center + 0.5 * step
            fac = 1.0 + 0.0j
            y = x
            # reduce into [lo, hi) by the step-1 / step-1/omega relations
            if step == 1.0:
                while y.real >= hi:
                    y -= 1.0
                    fac /= (1.0 - cmath.exp(TWO_PI_I * w * y))
                while y.real < lo:
                    fac *= (1.0 - cmath.exp(TWO_PI_I * w * y))
                    y += 1.0
            else:
                while y.real >= hi:
                    y -= step
                    fac /= (1.0 - cmath.exp(TWO_PI_I * y))
                while y.real < lo:
                    fac *= (1.0 - cmath.exp(TWO_PI_I * y))
                    y += step
            v = fac * self._window_value(y)
        self._cache[x] = v
        return v

    def log_value(self, x: complex, tol: float = LATTICE_TOL) -> complex:
        """log <x> on some branch; finite even where <x> itself overflows.

        Far from the real axis |<x>| grows like exp(c |Im x|) and products
        of several factors overflow double precision although their ratio
        is moderate; accumulating logarithms avoids that.
        """
        x = complex(x)
        cls = classify_lattice(self.mod, x, tol)
        if cls.kind == "zero":
            return complex(-math.inf, 0.0)
        if cls.kind == "pole":
            raise PoleError(f"<x> has a pole at {cls.point.value:g}; "
                            f"argument {x!r} is within {cls.distance:.2e}",
                            point=cls.point)
        if x.imag >= self._series_ymin:
            return self._log_angle_series(x)
        if x.imag <= -self._series_ymin:
            w = self.mod.omega
            log_sigma = 1j * math.pi * ((1.0 + w) * x - w * x * x)
            return log_sigma - self._log_angle_series(self.mod.strip_width - x)
        return cmath.log(self.value(x, tol))


_EVALUATORS: dict[float, AngleEvaluator] = {}


def get_evaluator(mod: ModulusParameters) -> AngleEvaluator:
    ev = _EVALUATORS.get(mod.omega)
    if ev is None:
        ev = AngleEvaluator(mod)
        _EVALUATORS[mod.omega] = ev
    return ev


def angle(mod: ModulusParameters, x: complex, tol: float = LATTICE_TOL) -> complex:
    """<x>; exact 0 on the zero lattice, PoleError on the pole lattice."""
    return get_evaluator(mod).value(x, tol)


def log_angle(mod: ModulusParameters, x: complex,
              tol: float = LATTICE_TOL) -> complex:
    """log <x> on some branch (see AngleEvaluator.log_value)."""
    return get_evaluator(mod).log_value(x, tol)


def residue_inverse_angle(mod: ModulusParameters, m: int, n: int) -> complex:
    """Residue of 1/<w> at w = -m - n/omega (m, n >= 0).

    The base residue at 0 is 1/(2 pi sqrt(omega)); transporting the zero
    of <.> from -m - n/omega to 0 by the two shift relations multiplies it
    by prod_{j=1}^{m}(1 - q^{-j}) * prod_{i=1}^{n}(1 - Q^{-i}).
    """
    m = int(m)
    n = int(n)
    if m < 0 or n < 0:
        raise DomainError(f"(m, n) must be non-negative, got {(m, n)!r}")
    w = mod.omega
    fac = 1.0 + 0.0j
    qinv = 1.0 / mod.q
    f = 1.0 + 0.0j
    for _ in range(m):
        f *= qinv
        fac *= (1.0 - f)
    Qinv = 1.0 / mod.Qbig
    f = 1.0 + 0.0j
    for _ in range(n):
        f *= Qinv
        fac *= (1.0 - f)
    return 1.0 / (2.0 * math.pi * math.sqrt(w) * fac)
