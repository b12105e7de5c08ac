"""Numerical q-special functions on the unit circle |q| = 1.

The package evaluates the double sine building blocks <x> and sigma(x),
Jordan-Pochhammer contour pairings I(phi, phitilde), the Barnes-type
q-hypergeometric function Psi(alpha, beta, gamma; x), and the |q| = 1
little q-Jacobi polynomials, and certifies the identities relating them
by high-precision contour quadrature.
"""

from .qcore import (ModulusParameters, make_modulus, torus_q, torus_Q, poch,
                    lattice_extrema)
from .doublesine import (angle, sigma, classify_lattice, get_evaluator,
                         residue_inverse_angle)
from .contour import ContourSpec, QuadratureResult, integrate_vertical
from .cocycle import (CocycleElement, CocycleTerm, DenomFactor,
                      JordanPochhammerWeight, b_chi, b_tilde_chi,
                      basis_elements, coboundary_generator, constant_element,
                      monomial_element, identity23_residual)
from .pairing import (PairingProblem, DetResult, pair, convergence_window,
                      det_closed_form, det_pairing_matrix,
                      mellin_sato_residual, offset_check, term_magnitudes)
from .qhyper import (HGParams, psi, difference_equation_residual,
                     heine_residuals, connection_residual,
                     connection_decomposition, phi_terminating,
                     psi_residue_corrected)
from .jacobi import (QPolynomial, little_jacobi, identity29_residual,
                     norm_constant, orthogonality_pair, OrthogonalityResult)
from .errors import (QoneError, DomainError, DivergenceError,
                     NoSeparatingLineError, DegenerateInputError, PoleError)

__version__ = "0.1.0"

__all__ = [
    "ModulusParameters", "make_modulus", "torus_q", "torus_Q", "poch",
    "lattice_extrema",
    "angle", "sigma", "classify_lattice", "get_evaluator",
    "residue_inverse_angle",
    "ContourSpec", "QuadratureResult", "integrate_vertical",
    "CocycleElement", "CocycleTerm", "DenomFactor", "JordanPochhammerWeight",
    "b_chi", "b_tilde_chi", "basis_elements", "coboundary_generator",
    "constant_element", "monomial_element", "identity23_residual",
    "PairingProblem", "DetResult", "pair", "convergence_window",
    "det_closed_form", "det_pairing_matrix", "mellin_sato_residual",
    "offset_check", "term_magnitudes",
    "HGParams", "psi", "difference_equation_residual", "heine_residuals",
    "connection_residual", "connection_decomposition", "phi_terminating",
    "psi_residue_corrected",
    "QPolynomial", "little_jacobi", "identity29_residual", "norm_constant",
    "orthogonality_pair", "OrthogonalityResult",
    "QoneError", "DomainError", "DivergenceError", "NoSeparatingLineError",
    "DegenerateInputError", "PoleError",
    "__version__",
]
