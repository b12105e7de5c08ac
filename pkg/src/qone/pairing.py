"""Contour pairing of q-side and Q-side elements against the weight

    Phi(z) = e^{2 pi i omega alpha z} prod_j <z + gamma'_j> / <z + gamma_j>.

The pairing I(phi, phitilde) integrates Phi * phi(t) * phitilde(T) over a
contour separating the left pole families (descending from -gamma_j, pushed
right by left-oriented chains) from the right families (ascending from
-gamma'_j + 1 + 1/omega, pushed left by right-oriented chains).  The pairing
is linear: a sum of terms is paired term by term, each with the contour its
own chains dictate.

When chains on both torus sides sit on the same reference offset, the
separating contour is generally not a straight line: finitely many poles of
the right family can lie left of every admissible line (and vice versa).
The integral is then taken along a line and corrected by the residues of the
misplaced poles, which is exactly the deformed contour of the defining
prescription.

Convergence at Im z -> +inf requires Re(alpha) + m + mtilde/omega > 0 for
every monomial pair (m on the q side, mtilde on the Q side); at -inf the
reflection formula turns each <z+g'>/<z+g> into an extra t^{g-g'} and each
denominator chain of length ell into t^{-ell}, giving the upper bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .contour import (ContourSpec, QuadratureResult, find_separating_offset,
                      integrate_vertical, offset_independence_check)
from .cocycle import (CocycleElement, DenomFactor, JordanPochhammerWeight,
                      b_chi, b_tilde_chi, basis_elements, constant_element,
                      eval_element)
from .doublesine import angle, get_evaluator, log_angle, sigma
from .errors import (DegenerateInputError, DivergenceError, DomainError,
                     NoSeparatingLineError)
from .qcore import torus_q, torus_Q

__all__ = [
    "PairingProblem", "phi_jp", "convergence_window", "pair",
    "det_pairing_matrix", "DetResult", "mellin_sato_residual",
    "pairing_contour_data", "offset_check", "term_magnitudes",
    "pair_with_scale",
]

_INT_TOL = 1e-9


def phi_jp_log(jp: JordanPochhammerWeight, z: complex) -> complex:
    """log Phi at a single point.

    Individual <z+g> factors grow like exp(c |Im z|) and their pointwise
    product can overflow far along the contour even though Phi itself is
    tiny there; summing logarithms keeps the evaluation finite.
    """
    mod = jp.mod
    lg = 2j * math.pi * mod.omega * jp.alpha * z
    for g in jp.gamma_primes:
        lg += log_angle(mod, z + g)
    for g in jp.gammas:
        lg -= log_angle(mod, z + g)
    return lg


def phi_jp(jp: JordanPochhammerWeight, z: complex) -> complex:
    """The weight Phi at a single point (0.0 when it underflows)."""
    lg = phi_jp_log(jp, z)
    if lg.real < -745.0:
        return 0.0 + 0.0j
    return cmath.exp(lg)


def _nearly_int(x: float) -> bool:
    return abs(x - round(x)) < _INT_TOL


def convergence_window(jp: JordanPochhammerWeight,
                       phi: CocycleElement | None = None,
                       phitilde: CocycleElement | None = None):
    """Allowed open interval for Re(alpha); empty windows return lo >= hi.

    The bounds are intersected over every pair of terms and every pair of
    numerator monomials of the two elements.
    """
    w = 1.0 / jp.mod.omega
    base_hi = sum(g.real for g in jp.gamma_primes) - sum(g.real
                                                          for g in jp.gammas)

    def term_stats(e, scale):
        # returns (max monomial burden for lo, min of ell_sum - m for hi)
        if e is None:
            return 0.0, 0.0
        lo_burden = -math.inf
        hi_slack = math.inf
        for term in e.terms:
            ells = sum(f.ell for f in term.denom_factors)
            for m, _ in term.numerator:
                lo_burden = max(lo_burden, -m * scale)
                hi_slack = min(hi_slack, (ells - m) * scale)
        return lo_burden, hi_slack

    lo_q, hi_q = term_stats(phi, 1.0)
    lo_Q, hi_Q = term_stats(phitilde, w)
    return (lo_q + lo_Q, base_hi + hi_q + hi_Q)


def _linear_factor_constraints(e: CocycleElement | None,
                               jp: JordanPochhammerWeight):
    """Classify every linear denominator factor of `e`.

    Matching is side-aware: a factor anchor sits on the gamma'_j (resp.
    gamma_j) ladder when it differs by a nonnegative (resp. positive)
    integer multiple of the side's step, 1 on the q side and 1/omega on
    the Q side.  Matched factors contribute one-sided pole extremes;
    unmatched ones only forbid pole lines with the side's period.

    Returns (lefts, rights, avoid_lines, right_shifts, left_shifts) where
    the shift dicts map the index j of the matched reference offset to the
    set of ladder shifts seen, used for joint-pole corrections.
    """
    lefts, rights, avoid = [], [], []
    right_shifts: dict = {}
    left_shifts: dict = {}
    if e is None:
        return lefts, rights, avoid, right_shifts, left_shifts
    q_side = e.side == "q"
    step = 1.0 if q_side else 1.0 / jp.mod.omega
    period = (1.0 / jp.mod.omega) if q_side else 1.0
    for term in e.terms:
        seen = []
        for f in term.denom_factors:
            for a in f.linear_anchors(step):
                for prev in seen:
                    if abs(a - prev) < 1e-10:
                        raise DegenerateInputError(
                            "repeated denominator factor within one term "
                            f"(anchor {a}); no squarefree pole structure")
                seen.append(a)
                matched = False
                for j, gp in enumerate(jp.gamma_primes):
                    s = (a - gp) / step
                    if abs(s.imag) < _INT_TOL and _nearly_int(s.real) \
                            and round(s.real) >= 0:
                        rights.append((-a + period).real)
                        right_shifts.setdefault(j, set()).add(round(s.real))
                        matched = True
                        break
                if matched:
                    continue
                for j, g in enumerate(jp.gammas):
                    s = (g - a) / step
                    if abs(s.imag) < _INT_TOL and _nearly_int(s.real) \
                            and round(s.real) >= 1:
                        lefts.append((-a).real)
                        left_shifts.setdefault(j, set()).add(round(s.real))
                        matched = True
                        break
                if not matched:
                    avoid.append(((-a).real, period))
    return lefts, rights, avoid, right_shifts, left_shifts


def _term_pole_data(jp: JordanPochhammerWeight,
                    tq: CocycleElement | None,
                    tQ: CocycleElement | None):
    """Pole geometry for one single-term pair.

    Returns (left_max, right_min, avoid, joint_left, joint_right).  The
    extremes come from the weight lattices and the per-factor strips; the
    joint lists hold the finitely many surviving simple poles created when
    chains on both torus sides sit on the same reference offset.  Joint
    right poles at -gamma'_j - s - s'/omega may fall left of every
    admissible line (and joint left poles at -gamma_j + i + i'/omega right
    of it); they are handled by residue corrections, not line placement.
    """
    w = 1.0 / jp.mod.omega
    lefts = [(-g).real for g in jp.gammas]
    rights = [(-g + 1 + w).real for g in jp.gamma_primes]
    lq, rq, aq, rs_q, ls_q = _linear_factor_constraints(tq, jp)
    lQ, rQ, aQ, rs_Q, ls_Q = _linear_factor_constraints(tQ, jp)
    lefts += lq + lQ
    rights += rq + rQ
    avoid = aq + aQ
    joint_right = []
    for j in set(rs_q) & set(rs_Q):
        gp = jp.gamma_primes[j]
        for s in rs_q[j]:
            for sp in rs_Q[j]:
                joint_right.append(-gp - s - sp * w)
    joint_left = []
    for j in set(ls_q) & set(ls_Q):
        g = jp.gammas[j]
        for i in ls_q[j]:
            for ip in ls_Q[j]:
                joint_left.append(-g + i + ip * w)
    left_max = max(lefts) if lefts else -math.inf
    right_min = min(rights) if rights else math.inf
    return left_max, right_min, avoid, joint_left, joint_right


def pairing_contour_data(jp: JordanPochhammerWeight,
                         phi: CocycleElement | None,
                         phitilde: CocycleElement | None):
    """Worst-case pole extremes over all term pairs, joint poles included.

    A line strictly between the returned extremes separates every pole
    family of every term pair without residue corrections; individual term
    pairs may admit wider gaps (see _term_pole_data).
    """
    left_max, right_min = -math.inf, math.inf
    avoid = []
    for tq in _split_terms(phi):
        for tQ in _split_terms(phitilde):
            lm, rm, av, jl, jr = _term_pole_data(jp, tq, tQ)
            lm = max([lm] + [p.real for p in jl])
            rm = min([rm] + [p.real for p in jr])
            left_max = max(left_max, lm)
            right_min = min(right_min, rm)
            avoid += av
    return left_max, right_min, avoid


def _split_terms(e: CocycleElement | None):
    if e is None:
        return [None]
    return [CocycleElement(e.side, terms=(t,)) for t in e.terms]


def _choose_rho(left_max: float, right_min: float, avoid,
                joint_reals=()) -> float:
    """A vertical-line offset in the open gap, kept clear of pole lines
    and of the real parts of joint poles (a line through one would hit it)."""
    rho = find_separating_offset(left_max, right_min)
    if not avoid and not joint_reals:
        return rho
    lo = rho - 2.0 if left_max == -math.inf else left_max
    hi = rho + 2.0 if right_min == math.inf else right_min
    span = hi - lo

    def clearance(r):
        d = math.inf
        for re0, period in avoid:
            k = round((r - re0) / period)
            d = min(d, abs(r - (re0 + k * period)))
        for x in joint_reals:
            d = min(d, abs(r - x))
        return d

    best_r, best_d = rho, clearance(rho)
    for i in range(1, 41):
        r = lo + span * (0.1 + 0.8 * i / 41.0)
        d = clearance(r)
        if d > best_d + 1e-15:
            best_r, best_d = r, d
    if best_d < 1e-7:
        raise NoSeparatingLineError(
            "every admissible vertical line passes through a pole family",
            left_max_re=left_max, right_min_re=right_min)
    return best_r


@dataclass
class PairingProblem:
    weight: JordanPochhammerWeight
    phi: CocycleElement | None = None
    phitilde: CocycleElement | None = None
    contour: ContourSpec | None = None
    tol: float = 1e-9


def _integrand_parts(jp: JordanPochhammerWeight,
                     phi: CocycleElement | None,
                     phit: CocycleElement | None):
    mod = jp.mod

    def f(zs: np.ndarray) -> np.ndarray:
        # combine in log space: the bare weight may overflow where the
        # elements decay (and vice versa) although the product is tiny
        out = np.empty(len(zs), dtype=complex)
        for i, z in enumerate(zs):
            z = complex(z)
            lg = phi_jp_log(jp, z)
            m = 1.0 + 0.0j
            if phi is not None:
                m *= eval_element(phi, mod, z)
            if phit is not None:
                m *= eval_element(phit, mod, z)
            if m == 0 or lg.real == -math.inf:
                out[i] = 0.0
                continue
            lg += cmath.log(m)
            out[i] = cmath.exp(lg) if lg.real > -745.0 else 0.0
        return out

    return f


def _integrand(problem: PairingProblem):
    return _integrand_parts(problem.weight, problem.phi, problem.phitilde)


def _family_poles(jp: JordanPochhammerWeight, tq, tQ, lo: float, hi: float):
    """Left- and right-family integrand poles with real part in [lo, hi].

    Near -gamma'_j + u + v/omega the right family consists of the weight
    lattice u, v >= 1, the strips u in -S (any v >= 1) and v in -S' (any
    u >= 1) cut by matched chain factors, and the joint points u in -S,
    v in -S'; S, S' are the matched shift sets of the two sides.  The left
    family mirrors this at -gamma_j with shifts i, i' >= 1 pushing right.
    """
    w = 1.0 / jp.mod.omega
    _, _, _, rs_q, ls_q = _linear_factor_constraints(tq, jp)
    _, _, _, rs_Q, ls_Q = _linear_factor_constraints(tQ, jp)
    left_pts, right_pts = [], []
    for j, gp in enumerate(jp.gamma_primes):
        negS = {-s for s in rs_q.get(j, set())}
        negSp = {-s for s in rs_Q.get(j, set())}
        base = -gp
        u0 = min(negS, default=1)
        v0 = min(negSp, default=1)
        u1 = int(math.ceil(hi - base.real - v0 * w)) + 1
        v1 = int(math.ceil((hi - base.real - u0) / w)) + 1
        for u in range(u0, max(u1, u0) + 1):
            for v in range(v0, max(v1, v0) + 1):
                if (u >= 1 and v >= 1) or (u in negS and (v >= 1 or v in negSp)) \
                        or (v in negSp and u >= 1):
                    p = base + u + v * w
                    if lo <= p.real <= hi:
                        right_pts.append(p)
    for j, g in enumerate(jp.gammas):
        I = ls_q.get(j, set())
        Ip = ls_Q.get(j, set())
        base = -g
        u1 = max(I, default=0)
        v1 = max(Ip, default=0)
        u0 = int(math.floor(lo - base.real - v1 * w)) - 1
        v0 = int(math.floor((lo - base.real - u1) / w)) - 1
        for u in range(u0, u1 + 1):
            for v in range(v0, v1 + 1):
                if (u <= 0 and v <= 0) or (u in I and (v <= 0 or v in Ip)) \
                        or (v in Ip and u <= 0):
                    p = base + u + v * w
                    if lo <= p.real <= hi:
                        left_pts.append(p)
    return left_pts, right_pts


def _residue_at(f, z0: complex, radius: float) -> complex:
    """Residue of a simple pole by trapezoid quadrature on a small circle."""
    n = 64
    total = 0.0 + 0.0j
    ang = 2.0 * math.pi / n
    zs = np.array([z0 + radius * cmath.exp(1j * ang * k) for k in range(n)])
    vals = f(zs)
    for k in range(n):
        total += vals[k] * radius * cmath.exp(1j * ang * k)
    return total / n


def _rho_in_overlap(lo: float, hi: float, avoid, pole_reals) -> float:
    """Line offset inside [lo, hi] with maximal clearance from pole lines
    and from the real parts of the family poles in the overlap region."""
    span = hi - lo

    def clearance(r):
        d = math.inf
        for re0, period in avoid:
            k = round((r - re0) / period)
            d = min(d, abs(r - (re0 + k * period)))
        for x in pole_reals:
            d = min(d, abs(r - x))
        return d

    best_r, best_d = None, -1.0
    for i in range(1, 200):
        r = lo + span * i / 200.0
        d = clearance(r)
        if d > best_d + 1e-15:
            best_r, best_d = r, d
    if best_d < 1e-7:
        raise NoSeparatingLineError(
            "no admissible vertical line stays clear of the pole families",
            left_max_re=lo, right_min_re=hi)
    return best_r


def _pair_single(jp: JordanPochhammerWeight,
                 tq: CocycleElement | None,
                 tQ: CocycleElement | None,
                 tol: float,
                 contour: ContourSpec | None) -> QuadratureResult:
    left_max, right_min, avoid, jl, jr = _term_pole_data(jp, tq, tQ)
    lo_enum = min([right_min] + [p.real for p in jr]) - 1e-6
    hi_enum = max([left_max] + [p.real for p in jl]) + 1e-6
    if contour is not None:
        spec = contour
        rho = spec.rho
    else:
        if left_max + 1e-7 < right_min:
            rho = _choose_rho(left_max, right_min, avoid,
                              [p.real for p in jl + jr])
        else:
            # Misplaced poles are corrected by residues, so the line may
            # sit anywhere with good clearance; widen the search window
            # beyond the (possibly sliver-thin) strip overlap.
            pad = 1.0 + 1.0 / jp.mod.omega
            lo_s, hi_s = lo_enum - pad, hi_enum + pad
            lpts, rpts = _family_poles(jp, tq, tQ, lo_s, hi_s)
            rho = _rho_in_overlap(lo_s, hi_s, avoid,
                                  [p.real for p in lpts + rpts])
        spec = ContourSpec(rho=rho, panel_tol=min(1e-12, tol * 1e-2))
    f = _integrand_parts(jp, tq, tQ)
    qr = integrate_vertical(f, spec, tol=tol)
    w = 1.0 / jp.mod.omega
    reach = 1.0 + w
    lo_enum = min(lo_enum, rho - 1e-6) - reach
    hi_enum = max(hi_enum, rho + 1e-6) + reach
    lpts, rpts = _family_poles(jp, tq, tQ, lo_enum, hi_enum)
    misplaced = [(p, +1.0) for p in lpts if p.real > rho] + \
                [(p, -1.0) for p in rpts if p.real < rho]
    if not misplaced:
        return qr
    value = qr.value
    allp = lpts + rpts
    for p, sign in misplaced:
        dmin = min((abs(x - p) for x in allp if abs(x - p) > 1e-9),
                   default=math.inf)
        if dmin < 1e-8:
            raise DegenerateInputError(
                f"coinciding poles near {p}; residue correction undefined")
        radius = min(0.25 * dmin, 0.1 * min(1.0, w))
        value += sign * 2j * math.pi * _residue_at(f, p, radius)
    return QuadratureResult(value=value,
                            abs_error_estimate=qr.abs_error_estimate,
                            panels_used=qr.panels_used,
                            truncation_bound=qr.truncation_bound,
                            converged=qr.converged,
                            y_used=qr.y_used)


def _pair_parts(problem: PairingProblem) -> list:
    jp = problem.weight
    lo, hi = convergence_window(jp, problem.phi, problem.phitilde)
    ra = jp.alpha.real
    if not (lo + 1e-12 < ra < hi - 1e-12):
        raise DivergenceError(
            f"Re(alpha)={ra:.6g} outside open convergence window "
            f"({lo:.6g}, {hi:.6g}); the integrand grows along the contour",
            detail={"window": (lo, hi), "re_alpha": ra})
    return [_pair_single(jp, tq, tQ, problem.tol, problem.contour)
            for tq in _split_terms(problem.phi)
            for tQ in _split_terms(problem.phitilde)]


def _aggregate(parts: list) -> QuadratureResult:
    if len(parts) == 1:
        return parts[0]
    return QuadratureResult(
        value=sum(p.value for p in parts),
        abs_error_estimate=sum(p.abs_error_estimate for p in parts),
        panels_used=sum(p.panels_used for p in parts),
        truncation_bound=max(p.truncation_bound for p in parts),
        converged=all(p.converged for p in parts),
        y_used=max(p.y_used for p in parts))


def pair(problem: PairingProblem) -> QuadratureResult:
    """I(phi, phitilde), summed term pair by term pair.

    Each single-term pair is integrated along its own separating line (or
    the supplied contour) with residue corrections for joint poles the
    line cannot avoid.
    """
    return _aggregate(_pair_parts(problem))


def pair_with_scale(problem: PairingProblem):
    """(I(phi, phitilde), sum of |term-pair values|) in one pass.

    The second component is a cancellation-free magnitude for judging
    near-zero pairings such as coboundaries.
    """
    parts = _pair_parts(problem)
    scale = max(sum(abs(p.value) for p in parts), 1e-300)
    return _aggregate(parts), scale


def term_magnitudes(problem: PairingProblem) -> float:
    """Sum of |I| over the single-term pairs of the problem.

    A cancellation-free magnitude: coboundary pairings vanish by
    cancellation between terms, so their residuals are judged against this
    scale rather than the (near-zero) total.
    """
    return pair_with_scale(problem)[1]


def offset_check(problem: PairingProblem, shift: float = 0.0,
                 tol: float = 1e-8) -> float:
    """|I at rho1 - I at rho2| for two distinct admissible common offsets.

    Both lines are placed in the widest obstacle-free cell of the gap
    shared by every term pair, so the comparison exercises genuine contour
    independence (residue corrections included when joint poles sit aside).
    """
    jp = problem.weight
    left_max, right_min = -math.inf, math.inf
    obstacles = []
    for tq in _split_terms(problem.phi):
        for tQ in _split_terms(problem.phitilde):
            lm, rm, av, jl, jr = _term_pole_data(jp, tq, tQ)
            left_max = max(left_max, lm)
            right_min = min(right_min, rm)
            for p in jl + jr:
                obstacles.append(p.real)
            for re0, period in av:
                k0 = math.floor((left_max - re0) / period) - 1
                k1 = math.ceil((right_min - re0) / period) + 1
                if math.isfinite(k0) and math.isfinite(k1):
                    obstacles += [re0 + k * period for k in range(int(k0),
                                                                  int(k1) + 1)]
    lo = left_max if math.isfinite(left_max) else right_min - 2.0
    hi = right_min if math.isfinite(right_min) else left_max + 2.0
    if not math.isfinite(lo):
        lo, hi = -1.0, 1.0
    if hi <= lo:
        raise NoSeparatingLineError(
            "term pairs admit no common separating line",
            left_max_re=left_max, right_min_re=right_min)
    cuts = sorted({lo, hi} | {x for x in obstacles if lo < x < hi})
    best = max(zip(cuts[:-1], cuts[1:]), key=lambda c: c[1] - c[0])
    a, b = best
    rho1 = a + (b - a) / 3.0
    rho2 = a + 2.0 * (b - a) / 3.0
    if shift:
        rho2 = min(max(rho1 + shift, a + 1e-6), b - 1e-6)
    ptol = min(1e-12, tol * 1e-2)
    v1 = pair(PairingProblem(jp, problem.phi, problem.phitilde,
                             contour=ContourSpec(rho=rho1, panel_tol=ptol),
                             tol=problem.tol)).value
    v2 = pair(PairingProblem(jp, problem.phi, problem.phitilde,
                             contour=ContourSpec(rho=rho2, panel_tol=ptol),
                             tol=problem.tol)).value
    return abs(v1 - v2)


@dataclass(frozen=True)
class DetResult:
    matrix: tuple
    numeric_det: complex
    closed_form: complex
    abs_error_estimate: float

    @property
    def relative_error(self) -> float:
        scale = max(abs(self.closed_form), abs(self.numeric_det), 1e-300)
        return abs(self.numeric_det - self.closed_form) / scale


def det_closed_form(jp: JordanPochhammerWeight) -> complex:
    """Product formula for det I(phi_j, phitilde_k) in the standard bases."""
    mod = jp.mod
    n = jp.n
    if len(jp.gamma_primes) != n:
        raise DomainError("determinant formula needs equal-length offset lists")
    val = angle(mod, 1.0) ** n
    val *= cmath.exp(-2j * math.pi * mod.omega * jp.alpha
                     * sum(jp.gamma_primes))
    val *= angle(mod, jp.alpha + sum(jp.gammas) - sum(jp.gamma_primes))
    val /= angle(mod, jp.alpha)
    for g in jp.gammas:
        for gp in jp.gamma_primes:
            val /= angle(mod, g - gp)
    for j in range(n):
        for k in range(j + 1, n):
            d = jp.gamma_primes[j] - jp.gamma_primes[k]
            val *= (1 - torus_q(mod, d)) * (1 - torus_Q(mod, d)) / sigma(mod, d)
    return val


def det_pairing_matrix(jp: JordanPochhammerWeight, tol: float = 1e-9) -> DetResult:
    """Numeric Gram determinant of the basis pairings vs. its closed form."""
    qb, Qb = basis_elements(jp)
    n = jp.n
    mat = np.empty((n, n), dtype=complex)
    err = 0.0
    for j in range(n):
        for k in range(n):
            res = pair(PairingProblem(jp, qb[j], Qb[k], tol=tol))
            mat[j, k] = res.value
            err = max(err, res.abs_error_estimate)
    det = complex(np.linalg.det(mat))
    return DetResult(matrix=tuple(map(tuple, mat.tolist())),
                     numeric_det=det,
                     closed_form=det_closed_form(jp),
                     abs_error_estimate=err)


def _shifted_weight(jp: JordanPochhammerWeight, k: int) -> JordanPochhammerWeight:
    return JordanPochhammerWeight(jp.mod, jp.alpha + k, jp.gammas,
                                  jp.gamma_primes)


def mellin_sato_residual(jp: JordanPochhammerWeight,
                         phitilde: CocycleElement | None,
                         chi: int = 1, tol: float = 1e-9) -> complex:
    """Relative residual of the shift-operator relation

        { b_chi^-(q^{-chi} D) - q^{chi alpha} b_chi^+(D) } Psi(alpha) = 0,

    where D: alpha -> alpha + 1 and Psi(alpha) = I(1, phitilde) under the
    weight with parameter alpha.  Every shifted pairing must converge; an
    infeasible shift raises DivergenceError naming it.
    """
    mod = jp.mod
    b = b_chi(jp, chi)
    qinv_chi = mod.q ** (-chi)
    pref = torus_q(mod, chi * jp.alpha)
    shifts = sorted({k for k, _ in b.plus_coeffs}
                    | {k for k, _ in b.minus_coeffs})
    psi_vals = {}
    for k in shifts:
        jpk = _shifted_weight(jp, k)
        lo, hi = convergence_window(jpk, None, phitilde)
        ra = jpk.alpha.real
        if not (lo + 1e-12 < ra < hi - 1e-12):
            raise DivergenceError(
                f"shifted pairing at alpha+{k} has Re(alpha)={ra:.6g} outside "
                f"window ({lo:.6g}, {hi:.6g})",
                detail={"shift": k, "window": (lo, hi)})
        psi_vals[k] = pair(PairingProblem(jpk, None, phitilde, tol=tol)).value
    minus_part = sum(c * qinv_chi ** k * psi_vals[k] for k, c in b.minus_coeffs)
    plus_part = sum(c * psi_vals[k] for k, c in b.plus_coeffs)
    residual = minus_part - pref * plus_part
    scale = max(abs(minus_part), abs(pref * plus_part), 1e-300)
    return residual / scale
