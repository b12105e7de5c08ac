"""Command-line surface: point evaluation, verification suites, sweeps.

Exit codes: 0 on success/pass, 1 on verification failure, 2 on usage or
feasibility errors.  Reports serialize deterministically for a fixed
(config, seed), including across thread counts; the JSON schema is
versioned (``schema: 1``) and the CSV column order is frozen (see README).
"""

from __future__ import annotations

import cmath
import json
import math
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import click

from . import __version__
from .cocycle import (CocycleElement, DenomFactor, JordanPochhammerWeight,
                      basis_elements, coboundary_generator, constant_element,
                      monomial_element)
from .contour import ContourSpec
from .doublesine import angle, residue_inverse_angle, sigma
from .errors import (DegenerateInputError, DivergenceError, DomainError,
                     NoSeparatingLineError, PoleError, QoneError)
from .jacobi import identity29_residual, little_jacobi, orthogonality_pair
from .pairing import (PairingProblem, convergence_window, det_pairing_matrix,
                      mellin_sato_residual, offset_check, pair,
                      term_magnitudes, pair_with_scale)
from .qcore import make_modulus, torus_q, torus_Q
from .qhyper import (HGParams, barnes_weight, connection_decomposition,
                     connection_residual, difference_equation_residual,
                     heine_residuals, phi_terminating, psi,
                     psi_residue_corrected)

OMEGA_DEFAULT = 1.0 / math.sqrt(2.0)

_FEASIBILITY_ERRORS = (DivergenceError, NoSeparatingLineError, DomainError,
                       DegenerateInputError, PoleError)

SUITES = ("doublesine", "qbeta", "det", "heine", "connection", "diffeq",
          "mellin-sato", "cocycle", "limit", "ortho", "all")

EVAL_FUNCTIONS = ("angle", "sigma", "psi", "qbeta", "det", "jacobi")


def default_fixtures() -> dict:
    return {
        "omega": OMEGA_DEFAULT,
        "doublesine": {"points": 200, "im_max": 5.0,
                       "eps": [1e-3, 1e-4]},
        "qbeta": {"alpha": 0.4, "beta": 0.9},
        "det": {
            "n1": {"alpha": 0.5, "gammas": [0.9], "gamma_primes": [0.1]},
            "n2": {"alpha": 0.5, "gammas": [1.1, 1.6],
                   "gamma_primes": [0.0, 0.3]},
            "n2_companion": {"alpha": 0.5, "gammas": [0.6, 0.8],
                             "gamma_primes": [0.0, 0.3]},
        },
        "heine": {"alpha": 0.4, "beta": 1.2, "gamma": 1.3, "x": 0.3},
        "connection": [
            {"alpha": 0.4, "beta": 1.2, "gamma": 1.3, "x": 0.3},
            {"alpha": 0.3, "beta": 0.8, "gamma": 1.1, "x": 0.5},
        ],
        "diffeq": {"alpha": 0.4, "beta": 1.2, "gamma": 2.0, "x": 0.3},
        "mellin-sato": {
            "stated": {"alpha": 0.4, "beta": 3.0},
            "companion": {"alpha": 0.1, "beta": 0.2},
        },
        "cocycle": {
            "qbeta_kernel": {"alpha": 0.2, "beta": 0.4, "alpha_T": 0.1},
            "psi_kernel": {"alpha": 1.5, "beta": 1.6, "gamma": 1.45,
                           "x": 0.3},
        },
        "limit": {"beta": 1.2, "gamma": 1.3, "x": 0.3, "ns": [0, 1, 2],
                  "eps": [1e-3, 1e-4]},
        "ortho": {
            "stated": {"alpha": 0.3, "beta": 6.0, "nmax": 2},
            "companion": {"omega": 1.0 / (4.0 * math.sqrt(2.0)),
                          "alpha": 0.25, "beta": 0.4, "nmax": 2},
            "identity29_nmax": 3,
        },
    }


@dataclass
class RunConfig:
    omega: float = OMEGA_DEFAULT
    tol: float = 1e-10
    suite_tol: float = 1e-8
    panel_tol: float = 1e-12
    max_panels: int = 6000
    y_max_cap: float = 256.0
    seed: int = 0
    trials: int = 10
    threads: int = 1
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        for name in ("tol", "suite_tol", "panel_tol"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")


# ---------------------------------------------------------------------------
# parsing / serialization helpers


def parse_complex(text: str) -> complex:
    """Parse 're' or 're,im' (decimal point fixed to '.')."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise click.UsageError(f"cannot parse complex value {text!r}; "
                           "expected 're' or 're,im'")


def parse_axis(text: str) -> list[float]:
    """Parse a sweep axis: a single value or 'start:stop:step' (inclusive)."""
    if ":" in text:
        pieces = text.split(":")
        if len(pieces) != 3:
            raise click.UsageError(f"bad range {text!r}; use start:stop:step")
        try:
            start, stop, step = (float(p) for p in pieces)
        except ValueError:
            raise click.UsageError(f"bad range {text!r}; use start:stop:step")
        if step <= 0:
            raise click.UsageError("range step must be positive")
        out = []
        v = start
        while v <= stop + 1e-12:
            out.append(round(v, 12))
            v += step
        return out
    try:
        return [float(text)]
    except ValueError:
        raise click.UsageError(f"cannot parse numeric value {text!r}")


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not serializable: {obj!r}")


def emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


# ---------------------------------------------------------------------------
# verification rows


def row(check_id: str, residual: float, scale: float, threshold: float,
        params: dict | None = None, diagnostic: str | None = None,
        quadrature: dict | None = None) -> dict:
    residual = float(residual)
    scale = float(scale)
    status = "pass" if residual <= threshold * scale else "fail"
    return {"id": check_id, "params": params or {},
            "residual": residual, "scale": scale, "threshold": threshold,
            "status": status, "diagnostic": diagnostic,
            "quadrature": quadrature}


def skipped(check_id: str, params: dict, diagnostic: str) -> dict:
    return {"id": check_id, "params": params, "residual": None,
            "scale": None, "threshold": None,
            "status": "skipped(infeasible)", "diagnostic": diagnostic,
            "quadrature": None}


def run_thunks(thunks, threads: int):
    """Run independent checks, preserving declared order in the output."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda t: t(), thunks))
    return [t() for t in thunks]


# ---------------------------------------------------------------------------
# suites


def suite_doublesine(cfg: RunConfig, fx: dict, rng: random.Random):
    mod = make_modulus(fx["omega"])
    ds = fx["doublesine"]
    pts = [complex(rng.uniform(-3.0, 3.0),
                   rng.uniform(-ds["im_max"], ds["im_max"]))
           for _ in range(int(ds["points"]))]

    def rel(a, b):
        return abs(a - b) / max(abs(a), abs(b), 1e-300)

    def chk_shift_q():
        r = max(rel(angle(mod, x + 1), angle(mod, x) / (1 - torus_q(mod, x)))
                for x in pts)
        return row("doublesine-shift-q", r, 1.0, 1e-10,
                   {"points": len(pts)})

    def chk_shift_Q():
        r = max(rel(angle(mod, x + 1 / mod.omega),
                    angle(mod, x) / (1 - torus_Q(mod, x))) for x in pts)
        return row("doublesine-shift-Q", r, 1.0, 1e-10,
                   {"points": len(pts)})

    def chk_reflect():
        Qc = 1 + 1 / mod.omega
        r = max(rel(angle(mod, x) * angle(mod, Qc - x), sigma(mod, x))
                for x in pts)
        return row("doublesine-reflection", r, 1.0, 1e-10,
                   {"points": len(pts)})

    def chk_one():
        val = angle(mod, 1.0)
        ref = 1j / math.sqrt(mod.omega)
        return row("doublesine-angle-one", abs(val - ref), abs(ref), 1e-12)

    def chk_slope():
        slope = 2 * math.pi * math.sqrt(mod.omega)
        errs = [abs(angle(mod, eps) / eps - slope) for eps in ds["eps"]]
        rows = [row(f"doublesine-slope-eps{eps:g}", err, slope, 1e-2,
                    {"eps": eps}) for eps, err in zip(ds["eps"], errs)]
        ratio = errs[1] / max(errs[0], 1e-300)
        expected = ds["eps"][1] / ds["eps"][0]
        rows.append(row("doublesine-slope-rate", ratio, 1.0, 3 * expected,
                        {"eps": ds["eps"]},
                        diagnostic=f"first-order expects ~{expected:g}"))
        return rows

    rows = run_thunks([chk_shift_q, chk_shift_Q, chk_reflect, chk_one],
                      cfg.threads)
    rows += chk_slope()
    return rows


def _qbeta_problem(mod, alpha, beta, tol):
    jp = JordanPochhammerWeight(mod, alpha, (beta,), (0.0,))
    phi = CocycleElement("q", {0: 1.0}, (DenomFactor(0.0, 1, "right"),))
    phit = CocycleElement("Q", {0: 1.0}, (DenomFactor(0.0, 1, "right"),))
    return PairingProblem(jp, phi, phit, tol=tol)


def _qbeta_closed(mod, alpha, beta):
    return (angle(mod, 1.0) * angle(mod, alpha + beta)
            / (angle(mod, alpha) * angle(mod, beta)))


def suite_qbeta(cfg: RunConfig, fx: dict, rng: random.Random):
    mod = make_modulus(fx["omega"])
    a0, b0 = fx["qbeta"]["alpha"], fx["qbeta"]["beta"]
    draws = []
    attempts = 0
    while len(draws) < cfg.trials and attempts < 100 * cfg.trials:
        attempts += 1
        beta = rng.uniform(0.1, 2.0)
        hi = 1 + 1 / mod.omega - beta
        if hi < 0.2:
            continue
        alpha = rng.uniform(0.05, min(2.0, hi - 0.05))
        draws.append((alpha, beta))

    def chk_at(label, alpha, beta):
        def thunk():
            try:
                res = pair(_qbeta_problem(mod, alpha, beta, cfg.tol))
            except _FEASIBILITY_ERRORS as exc:
                return skipped(label, {"alpha": alpha, "beta": beta}, str(exc))
            closed = _qbeta_closed(mod, alpha, beta)
            return row(label, abs(res.value - closed), abs(closed), 1e-8,
                       {"alpha": alpha, "beta": beta},
                       quadrature={"panels": res.panels_used,
                                   "truncation": res.truncation_bound,
                                   "abs_err": res.abs_error_estimate})
        return thunk

    def chk_offsets():
        closed = _qbeta_closed(mod, a0, b0)
        diff = offset_check(_qbeta_problem(mod, a0, b0, cfg.tol),
                            tol=cfg.tol)
        return row("qbeta-offset-independence", diff, abs(closed), 1e-10,
                   {"alpha": a0, "beta": b0})

    thunks = [chk_at("qbeta-closed-form", a0, b0)]
    thunks += [chk_at(f"qbeta-draw-{i}", a, b)
               for i, (a, b) in enumerate(draws)]
    thunks.append(chk_offsets)
    return run_thunks(thunks, cfg.threads)


def suite_det(cfg: RunConfig, fx: dict, rng: random.Random):
    mod = make_modulus(fx["omega"])

    def chk(label, rec, threshold):
        def thunk():
            jp = JordanPochhammerWeight(mod, rec["alpha"],
                                        tuple(rec["gammas"]),
                                        tuple(rec["gamma_primes"]))
            lo, hi = convergence_window(jp, basis_elements(jp)[0][0],
                                        basis_elements(jp)[1][0])
            if not (lo < jp.alpha.real < hi):
                return skipped(label, dict(rec),
                               f"Re(alpha)={jp.alpha.real:g} outside "
                               f"convergence window ({lo:g}, {hi:g})")
            try:
                res = det_pairing_matrix(jp, tol=cfg.tol)
            except _FEASIBILITY_ERRORS as exc:
                return skipped(label, dict(rec), str(exc))
            diag = None
            if res.relative_error > threshold:
                ratio = res.numeric_det / res.closed_form
                diag = (f"numeric/closed = {ratio:.12g} "
                        f"(|ratio| = {abs(ratio):.12g})")
            return row(label, res.relative_error, 1.0, threshold,
                       dict(rec), diagnostic=diag)
        return thunk

    thunks = [chk("det-n1", fx["det"]["n1"], 1e-6),
              chk("det-n2", fx["det"]["n2"], 1e-6),
              chk("det-n2-companion", fx["det"]["n2_companion"], 1e-6)]
    return run_thunks(thunks, cfg.threads)


def _feasible_heine_draw(mod, rng):
    for _ in range(200):
        alpha = rng.uniform(0.2, 1.2)
        beta = rng.uniform(0.3, 1.4)
        gamma = rng.uniform(0.9, 1.8)
        hi = 1 + 1 / mod.omega + gamma - alpha - beta
        if hi < 0.7:
            continue
        x = rng.uniform(0.3, min(0.8, hi - 0.3))
        # the three relations shift parameters by one unit; leave margin
        if x + 1 < hi and x > 0.25:
            return alpha, beta, gamma, x
    raise DomainError("no feasible random draw found")


def suite_heine(cfg: RunConfig, fx: dict, rng: random.Random):
    mod = make_modulus(fx["omega"])
    hf = fx["heine"]
    base = (hf["alpha"], hf["beta"], hf["gamma"], hf["x"])
    n_draws = min(cfg.trials, 5)
    draws = [_feasible_heine_draw(mod, rng) for _ in range(n_draws)]
    # The alternate phitilde must be anchored on a ladder of the weight
    # that the contiguous relations never shift; 1 + 1/omega is one.
    phit = CocycleElement(
        "Q", {0: 1.0},
        (DenomFactor(1.0 + 1.0 / mod.omega, 1, "right"),))

    def chk(label, params, variant):
        def thunk():
            par = HGParams(mod, *params)
            try:
                rs = heine_residuals(par, phitilde=variant, tol=cfg.tol)
            except _FEASIBILITY_ERRORS as exc:
                return [skipped(f"{label}-r{i + 1}",
                                _hg_dict(params), str(exc))
                        for i in range(3)]
            return [row(f"{label}-r{i + 1}", abs(r), 1.0, 1e-8,
                        _hg_dict(params)) for i, r in enumerate(rs)]
        return thunk

    thunks = [chk("heine-fixture", base, None)]
    thunks += [chk(f"heine-draw-{i}", d, None) for i, d in enumerate(draws)]
    thunks.append(chk("heine-fixture-phitilde", base, phit))
    out = []
    for group in run_thunks(thunks, cfg.threads):
        out.extend(group)
    return out


def _hg_dict(params):
    alpha, beta, gamma, x = params
    return {"alpha": alpha, "beta": beta, "gamma": gamma, "x": x}


def suite_connection(cfg: RunConfig, fx: dict, rng: random.Random):
    mod = make_modulus(fx["omega"])

    def chk_conn(i, rec):
        def thunk():
            par = HGParams(mod, rec["alpha"], rec["beta"], rec["gamma"],
                           rec["x"])
            try:
                r = connection_residual(par, tol=cfg.tol)
            except _FEASIBILITY_ERRORS as exc:
                return skipped(f"connection-fixture-{i}", dict(rec),
                               str(exc))
            return row(f"connection-fixture-{i}", abs(r), 1.0, 1e-8,
                       dict(rec))
        return thunk

    def chk_decomp(i, rec):
        def thunk():
            par = HGParams(mod, rec["alpha"], rec["beta"], rec["gamma"],
                           rec["x"])
            try:
                total, direct = connection_decomposition(par, tol=cfg.tol)
            except _FEASIBILITY_ERRORS as exc:
                return skipped(f"connection-decomposition-{i}", dict(rec),
                               str(exc))
            return row(f"connection-decomposition-{i}",
                       abs(total - direct), abs(direct), 1e-8, dict(rec))
        return thunk

    thunks = []
    for i, rec in enumerate(fx["connection"]):
        thunks.append(chk_conn(i, rec))
        thunks.append(chk_decomp(i, rec))
    return run_thunks(thunks, cfg.threads)


def suite_diffeq(cfg: RunConfig, fx: dict, rng: random.Random):
    mod = make_modulus(fx["omega"])
    rec = fx["diffeq"]

    def thunk():
        par = HGParams(mod, rec["alpha"], rec["beta"], rec["gamma"],
                       rec["x"])
        try:
            r = difference_equation_residual(par, tol=cfg.tol)
        except _FEASIBILITY_ERRORS as exc:
            return skipped("diffeq-fixture", dict(rec), str(exc))
        return row("diffeq-fixture", abs(r), 1.0, 1e-8, dict(rec))

    return run_thunks([thunk], cfg.threads)


def suite_mellin_sato(cfg: RunConfig, fx: dict, rng: random.Random):
    mod = make_modulus(fx["omega"])
    phit = CocycleElement("Q", {0: 1.0}, (DenomFactor(0.0, 1, "right"),))

    def chk(label, rec, chi):
        def thunk():
            jp = JordanPochhammerWeight(mod, rec["alpha"], (rec["beta"],),
                                        (0.0,))
            try:
                r = mellin_sato_residual(jp, phit, chi=chi, tol=cfg.tol)
            except _FEASIBILITY_ERRORS as exc:
                return skipped(label, {**rec, "chi": chi}, str(exc))
            return row(label, abs(r), 1.0, 1e-8, {**rec, "chi": chi})
        return thunk

    thunks = []
    for chi in (1, -1):
        thunks.append(chk(f"mellin-sato-stated-chi{chi:+d}",
                          fx["mellin-sato"]["stated"], chi))
        thunks.append(chk(f"mellin-sato-companion-chi{chi:+d}",
                          fx["mellin-sato"]["companion"], chi))
    return run_thunks(thunks, cfg.threads)


def _cocycle_cells(mod, fx):
    """The (kernel, side, chi, psi) cells with feasible companion data."""
    kq = fx["cocycle"]["qbeta_kernel"]
    kp = fx["cocycle"]["psi_kernel"]
    Qc = 1 + 1 / mod.omega
    jp_q = JordanPochhammerWeight(mod, kq["alpha"], (kq["beta"],), (0.0,))
    jp_qT = JordanPochhammerWeight(mod, kq["alpha_T"], (kq["beta"],), (0.0,))
    jp_p = JordanPochhammerWeight(mod, kp["x"],
                                  (kp["alpha"], kp["beta"]),
                                  (Qc, kp["gamma"]))
    qb_q, Qb_q = basis_elements(jp_q)
    qb_p, Qb_p = basis_elements(jp_p)
    e_q1 = CocycleElement("Q", {0: 1.0}, (DenomFactor(0.0, 1, "right"),))
    e_q2 = CocycleElement("Q", {0: 1.0}, (DenomFactor(0.0, 2, "right"),))
    e_t1 = CocycleElement("q", {0: 1.0}, (DenomFactor(0.0, 1, "right"),))
    e_t3 = CocycleElement("q", {0: 1.0}, (DenomFactor(0.0, 3, "right"),))
    e_p2Q = CocycleElement("Q", {0: 1.0},
                           (DenomFactor(kp["gamma"], 2, "right"),))
    e_p2q = CocycleElement("q", {0: 1.0},
                           (DenomFactor(kp["gamma"], 2, "right"),))
    cells = []
    for chi in (1, -1, 2, -2):
        for psi_name, elem, partner, jp in (
                ("1", constant_element("q"), e_q1, jp_q),
                ("t", monomial_element("q", 1), e_q2, jp_q),
                ("basis", qb_q[0], e_q1, jp_q)):
            cells.append(("qbeta", "q", chi, psi_name, elem, partner, jp))
        for psi_name, elem, partner, jp in (
                ("1", constant_element("Q"), e_t1, jp_q),
                ("T", monomial_element("Q", 1), e_t3, jp_qT),
                ("basis", Qb_q[0], e_t1, jp_q)):
            cells.append(("qbeta", "Q", chi, psi_name, elem, partner, jp))
        for psi_name, elem, partner, jp in (
                ("1", constant_element("q"), None, jp_p),
                ("t", monomial_element("q", 1), e_p2Q, jp_p),
                ("basis", qb_p[1], None, jp_p)):
            cells.append(("psi", "q", chi, psi_name, elem, partner, jp))
        for psi_name, elem, partner, jp in (
                ("1", constant_element("Q"), None, jp_p),
                ("T", monomial_element("Q", 1), e_p2q, jp_p),
                ("basis", Qb_p[1], None, jp_p)):
            cells.append(("psi", "Q", chi, psi_name, elem, partner, jp))
    return cells


def suite_cocycle(cfg: RunConfig, fx: dict, rng: random.Random):
    mod = make_modulus(fx["omega"])

    def chk(kernel, side, chi, psi_name, elem, partner, jp):
        label = f"cocycle-{kernel}-{side}-chi{chi:+d}-psi={psi_name}"
        params = {"kernel": kernel, "side": side, "chi": chi,
                  "psi": psi_name, "alpha": jp.alpha.real}

        def thunk():
            try:
                delta = coboundary_generator(elem, jp, chi)
                tol_cell = max(cfg.tol, 1e-9)
                if side == "q":
                    prob = PairingProblem(jp, delta, partner, tol=tol_cell)
                else:
                    prob = PairingProblem(jp, partner, delta, tol=tol_cell)
                res, scale = pair_with_scale(prob)
                val = res.value
            except _FEASIBILITY_ERRORS as exc:
                return skipped(label, params, str(exc))
            return row(label, abs(val), scale, 1e-8, params)
        return thunk

    thunks = [chk(*cell) for cell in _cocycle_cells(mod, fx)]
    return run_thunks(thunks, cfg.threads)


def suite_limit(cfg: RunConfig, fx: dict, rng: random.Random):
    mod = make_modulus(fx["omega"])
    rec = fx["limit"]
    beta, gamma, x = rec["beta"], rec["gamma"], rec["x"]

    def chk_exact(n):
        def thunk():
            params = {"n": n, "beta": beta, "gamma": gamma, "x": x}
            try:
                val = psi_residue_corrected(
                    HGParams(mod, -float(n), beta, gamma, x), n, tol=cfg.tol)
                ref = phi_terminating(n, beta, gamma, x, mod)
            except _FEASIBILITY_ERRORS as exc:
                return skipped(f"limit-exact-n{n}", params, str(exc))
            return row(f"limit-exact-n{n}", abs(val - ref), abs(ref), 1e-8,
                       params)
        return thunk

    def chk_rate(n):
        def thunk():
            params = {"n": n, "eps": rec["eps"]}
            try:
                ref = phi_terminating(n, beta, gamma, x, mod)
                errs = [abs(psi_residue_corrected(
                    HGParams(mod, -float(n) + eps, beta, gamma, x),
                    n, tol=cfg.tol) - ref) for eps in rec["eps"]]
            except _FEASIBILITY_ERRORS as exc:
                return skipped(f"limit-rate-n{n}", params, str(exc))
            ratio = errs[1] / max(errs[0], 1e-300)
            expected = rec["eps"][1] / rec["eps"][0]
            return row(f"limit-rate-n{n}", ratio, 1.0, 3 * expected, params,
                       diagnostic=f"O(eps) expects ~{expected:g}; "
                                  f"errors {errs[0]:.3e} -> {errs[1]:.3e}")
        return thunk

    thunks = [chk_exact(n) for n in rec["ns"]]
    thunks += [chk_rate(n) for n in rec["ns"]]
    return run_thunks(thunks, cfg.threads)


def suite_ortho(cfg: RunConfig, fx: dict, rng: random.Random):
    rec = fx["ortho"]

    def chk_gram(label, omega, alpha, beta, m, n):
        def thunk():
            mod = make_modulus(omega)
            params = {"omega": omega, "alpha": alpha, "beta": beta,
                      "m": m, "n": n}
            try:
                r = orthogonality_pair(m, n, alpha, beta, mod, tol=cfg.tol)
            except _FEASIBILITY_ERRORS as exc:
                return skipped(label, params, str(exc))
            scale = max(abs(r.target), 1.0)
            return row(label, abs(r.numeric - r.target), scale, 1e-8,
                       params)
        return thunk

    def chk_id29(m, n):
        def thunk():
            mod = make_modulus(fx["omega"])
            a29, b29 = rec["stated"]["alpha"], rec["stated"]["beta"]
            params = {"m": m, "n": n, "alpha": a29, "beta": b29}
            r = identity29_residual(m, n, a29, b29, mod)
            return row(f"ortho-identity29-{m}{n}", abs(r), 1.0, 1e-12,
                       params)
        return thunk

    st, co = rec["stated"], rec["companion"]
    thunks = []
    for m in range(st["nmax"] + 1):
        for n in range(m, st["nmax"] + 1):
            thunks.append(chk_gram(f"ortho-gram-stated-{m}{n}",
                                   fx["omega"], st["alpha"], st["beta"],
                                   m, n))
    for m in range(co["nmax"] + 1):
        for n in range(m, co["nmax"] + 1):
            thunks.append(chk_gram(f"ortho-gram-companion-{m}{n}",
                                   co["omega"], co["alpha"], co["beta"],
                                   m, n))
    nmax29 = rec["identity29_nmax"]
    for m in range(nmax29 + 1):
        for n in range(m, nmax29 + 1):
            thunks.append(chk_id29(m, n))
    return run_thunks(thunks, cfg.threads)


SUITE_BUILDERS = {
    "doublesine": suite_doublesine,
    "qbeta": suite_qbeta,
    "det": suite_det,
    "heine": suite_heine,
    "connection": suite_connection,
    "diffeq": suite_diffeq,
    "mellin-sato": suite_mellin_sato,
    "cocycle": suite_cocycle,
    "limit": suite_limit,
    "ortho": suite_ortho,
}


def build_report(suite: str, cfg: RunConfig, fixtures: dict) -> dict:
    names = list(SUITE_BUILDERS) if suite == "all" else [suite]
    checks = []
    for name in names:
        rng = random.Random(f"{cfg.seed}:{name}")
        checks.extend(SUITE_BUILDERS[name](cfg, fixtures, rng))
    passed = all(c["status"] == "pass" for c in checks)
    return {
        "schema": 1,
        "version": __version__,
        "suite": suite,
        "omega": fixtures["omega"],
        "seed": cfg.seed,
        "trials": cfg.trials,
        "tolerances": {"tol": cfg.tol, "suite_tol": cfg.suite_tol},
        "quadrature": {"panel_tol": cfg.panel_tol,
                       "max_panels": cfg.max_panels,
                       "y_max_cap": cfg.y_max_cap},
        "fixtures": {k: v for k, v in fixtures.items()
                     if suite in ("all", k) and k != "omega"},
        "checks": checks,
        "pass": passed,
        "wall_time": None,
    }


def report_to_csv(report: dict) -> str:
    lines = ["suite,check_id,residual,scale,threshold,status,diagnostic"]
    for c in report["checks"]:
        res = "" if c["residual"] is None else repr(c["residual"])
        sc = "" if c["scale"] is None else repr(c["scale"])
        th = "" if c["threshold"] is None else repr(c["threshold"])
        diag = (c["diagnostic"] or "").replace(",", ";")
        lines.append(f"{report['suite']},{c['id']},{res},{sc},{th},"
                     f"{c['status']},{diag}")
    lines.append(f"# pass={str(report['pass']).lower()} "
                 f"seed={report['seed']} schema={report['schema']} "
                 f"version={report['version']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _common_options(fn):
    for opt in reversed([
        click.option("--omega", type=float, default=OMEGA_DEFAULT,
                     show_default=True, help="modulus omega (real)"),
        click.option("--tol", type=float, default=1e-10, show_default=True),
        click.option("--suite-tol", type=float, default=1e-8,
                     show_default=True),
        click.option("--trials", type=int, default=10, show_default=True),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--format", "output_format",
                     type=click.Choice(["json", "csv"]), default="json",
                     show_default=True),
        click.option("--out", "output_path", type=click.Path(), default=None),
        click.option("--fixtures", "fixtures_path", type=click.Path(),
                     default=None),
        click.option("--threads", type=int, default=1, show_default=True),
    ]):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="qone")
def main():
    """q-special functions at |q| = 1: evaluate, verify, sweep."""


@main.command("eval")
@click.argument("function", type=click.Choice(EVAL_FUNCTIONS))
@click.option("--x", "x_text", type=str, default=None,
              help="complex as 're' or 're,im'")
@click.option("--alpha", "alpha_text", type=str, default=None)
@click.option("--beta", "beta_text", type=str, default=None)
@click.option("--gamma", "gamma_text", type=str, multiple=True,
              help="for det: repeat for each reference offset")
@click.option("--gamma-prime", "gamma_prime_text", type=str, multiple=True)
@click.option("--n", type=int, default=None)
@_common_options
def cmd_eval(function, x_text, alpha_text, beta_text, gamma_text,
             gamma_prime_text, n, omega, tol, suite_tol, trials, seed,
             output_format, output_path, fixtures_path, threads):
    """Evaluate one function at one point."""
    try:
        mod = make_modulus(omega)
        value, abs_err = _eval_dispatch(
            function, mod, x_text, alpha_text, beta_text, gamma_text,
            gamma_prime_text, n, tol)
    except click.UsageError:
        raise
    except _FEASIBILITY_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if output_format == "csv":
        emit(f"{value.real!r}\t{value.imag!r}\n", output_path)
    else:
        emit(json.dumps({"re": value.real, "im": value.imag,
                         "abs_err": abs_err}) + "\n", output_path)


def _require(text, flag):
    if text is None:
        raise click.UsageError(f"{flag} is required for this function")
    return parse_complex(text)


def _eval_dispatch(function, mod, x_text, alpha_text, beta_text, gamma_text,
                   gamma_prime_text, n, tol):
    if function == "angle":
        x = _require(x_text, "--x")
        v = angle(mod, x)
        return v, 2e-13 * abs(v)
    if function == "sigma":
        x = _require(x_text, "--x")
        v = sigma(mod, x)
        return v, 1e-15 * abs(v)
    if function == "qbeta":
        alpha = _require(alpha_text, "--alpha")
        beta = _require(beta_text, "--beta")
        res = pair(_qbeta_problem(mod, alpha, beta, tol))
        return res.value, res.abs_error_estimate
    if function == "psi":
        alpha = _require(alpha_text, "--alpha")
        beta = _require(beta_text, "--beta")
        if len(gamma_text) != 1:
            raise click.UsageError("psi needs exactly one --gamma")
        gamma = parse_complex(gamma_text[0])
        x = _require(x_text, "--x")
        par = HGParams(mod, alpha, beta, gamma, x)
        lo, hi = par.window
        if not (lo < x.real < hi):
            raise DivergenceError(
                f"x outside convergence window ({lo:g}, {hi:g})")
        jp = barnes_weight(par)
        res = pair(PairingProblem(jp, None, None, tol=tol))
        pref = (angle(mod, alpha) * angle(mod, beta)
                / (angle(mod, 1.0) * angle(mod, gamma)))
        return pref * res.value, abs(pref) * res.abs_error_estimate
    if function == "det":
        alpha = _require(alpha_text, "--alpha")
        if not gamma_text or len(gamma_text) != len(gamma_prime_text):
            raise click.UsageError(
                "det needs matching --gamma/--gamma-prime lists")
        jp = JordanPochhammerWeight(
            mod, alpha, tuple(parse_complex(g) for g in gamma_text),
            tuple(parse_complex(g) for g in gamma_prime_text))
        res = det_pairing_matrix(jp, tol=tol)
        return res.numeric_det, res.abs_error_estimate
    if function == "jacobi":
        if n is None:
            raise click.UsageError("jacobi needs --n")
        alpha = _require(alpha_text, "--alpha")
        beta = _require(beta_text, "--beta")
        x = _require(x_text, "--x")
        p = little_jacobi(n, alpha, beta, mod)
        v = p(torus_q(mod, x))
        return v, 1e-13 * max(abs(v), 1.0)
    raise click.UsageError(f"unknown function {function!r}")


@main.command("verify")
@click.argument("suite", type=click.Choice(SUITES))
@_common_options
def cmd_verify(suite, omega, tol, suite_tol, trials, seed, output_format,
               output_path, fixtures_path, threads):
    """Run a verification suite and emit a machine-readable report."""
    try:
        cfg = RunConfig(omega=omega, tol=tol, suite_tol=suite_tol,
                        seed=seed, trials=trials, threads=max(threads, 1),
                        output_format=output_format,
                        output_path=output_path)
    except DomainError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    fixtures = default_fixtures()
    fixtures["omega"] = omega
    if fixtures_path:
        try:
            with open(fixtures_path, "r", encoding="utf-8") as fh:
                fixtures.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            click.echo(f"error: cannot read fixtures: {exc}", err=True)
            sys.exit(2)
    t0 = time.monotonic()
    try:
        report = build_report(suite, cfg, fixtures)
    except QoneError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    elapsed = time.monotonic() - t0
    if output_format == "csv":
        emit(report_to_csv(report), output_path)
    else:
        emit(json.dumps(report, indent=2, default=_json_default) + "\n",
             output_path)
    click.echo(f"wall_time: {elapsed:.3f}s", err=True)
    sys.exit(0 if report["pass"] else 1)


@main.command("sweep")
@click.argument("function",
                type=click.Choice(["angle", "sigma", "psi", "qbeta",
                                   "jacobi"]))
@click.option("--x", "x_axis", type=str, default=None,
              help="value or start:stop:step")
@click.option("--alpha", "alpha_axis", type=str, default=None)
@click.option("--beta", "beta_axis", type=str, default=None)
@click.option("--gamma", "gamma_axis", type=str, default=None)
@click.option("--omega-axis", "omega_axis", type=str, default=None,
              help="sweep omega itself (value or start:stop:step)")
@click.option("--n", type=int, default=None)
@click.option("--check", "check_name", type=click.Choice(["diffeq"]),
              default=None, help="append a residual column")
@click.option("--max-points", type=int, default=2000, show_default=True)
@_common_options
def cmd_sweep(function, x_axis, alpha_axis, beta_axis, gamma_axis,
              omega_axis, n, check_name, max_points, omega, tol, suite_tol,
              trials, seed, output_format, output_path, fixtures_path,
              threads):
    """Evaluate a function over a parameter grid."""
    axes = {}
    for name, text in (("omega", omega_axis), ("alpha", alpha_axis),
                       ("beta", beta_axis), ("gamma", gamma_axis),
                       ("x", x_axis)):
        if text is not None:
            axes[name] = parse_axis(text)
    if not axes:
        raise click.UsageError("at least one axis is required")
    total = 1
    for vals in axes.values():
        total *= len(vals)
    if total > max_points:
        click.echo(f"error: grid has {total} points, cap is {max_points}",
                   err=True)
        sys.exit(2)
    names = list(axes)
    grids = [[]]
    for nm in names:
        grids = [g + [v] for g in grids for v in axes[nm]]

    def do_point(values):
        pt = dict(zip(names, values))
        om = pt.get("omega", omega)
        try:
            mod = make_modulus(om)
            value, abs_err, residual = _sweep_point(
                function, mod, pt, n, check_name, tol)
            feasible = True
        except _FEASIBILITY_ERRORS:
            value, abs_err, residual, feasible = None, None, None, False
        rec = {nm: pt[nm] for nm in names}
        rec.update({
            "re": None if value is None else float(value.real),
            "im": None if value is None else float(value.imag),
            "abs_err": None if abs_err is None else float(abs_err),
            "feasible": feasible,
        })
        if check_name:
            rec["residual"] = None if residual is None else float(residual)
        return rec

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(do_point, grids))
    else:
        rows = [do_point(g) for g in grids]
    if output_format == "json":
        emit(json.dumps({"schema": 1, "version": __version__,
                         "function": function, "rows": rows}, indent=2)
             + "\n", output_path)
    else:
        cols = names + ["re", "im", "abs_err", "feasible"]
        if check_name:
            cols.append("residual")
        lines = [",".join(cols)]
        for rec in rows:
            lines.append(",".join(
                "" if rec[c] is None else
                (str(rec[c]).lower() if isinstance(rec[c], bool)
                 else repr(rec[c])) for c in cols))
        emit("\n".join(lines) + "\n", output_path)


def _sweep_point(function, mod, pt, n, check_name, tol):
    residual = None
    if function == "angle":
        v = angle(mod, pt["x"])
        return v, 2e-13 * abs(v), residual
    if function == "sigma":
        v = sigma(mod, pt["x"])
        return v, 1e-15 * abs(v), residual
    if function == "qbeta":
        res = pair(_qbeta_problem(mod, pt["alpha"], pt["beta"], tol))
        return res.value, res.abs_error_estimate, residual
    if function == "psi":
        par = HGParams(mod, pt["alpha"], pt["beta"], pt["gamma"], pt["x"])
        v = psi(par, tol=tol)
        if check_name == "diffeq":
            # The relation evaluates shifted parameters; their windows can
            # close even where the point itself is fine.
            try:
                residual = abs(difference_equation_residual(par, tol=tol))
            except _FEASIBILITY_ERRORS:
                residual = None
        return v, tol, residual
    if function == "jacobi":
        if n is None:
            raise click.UsageError("jacobi sweep needs --n")
        p = little_jacobi(n, pt["alpha"], pt["beta"], mod)
        v = p(torus_q(mod, pt["x"]))
        return v, 1e-13 * max(abs(v), 1.0), residual
    raise click.UsageError(f"unknown function {function!r}")


if __name__ == "__main__":
    main()
