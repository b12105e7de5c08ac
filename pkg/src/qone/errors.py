"""Exception types shared across the library.

Every failure mode a caller might want to branch on gets its own class;
all of them derive from QoneError so the CLI can map them to exit codes.
"""


class QoneError(Exception):
    """Base class for library errors."""


class DomainError(QoneError):
    """Invalid input outside a function's domain (bad omega, non-finite value)."""


class PoleError(QoneError):
    """Evaluation requested at (or within tolerance of) a pole.

    Attributes carry enough context to report which factor blew up.
    """

    def __init__(self, message, point=None, factor_index=None):
        super().__init__(message)
        self.point = point
        self.factor_index = factor_index


class DegenerateInputError(QoneError):
    """Parameters make an identity's statement undefined (e.g. A = B in a
    coefficient that divides by A - B)."""


class NoSeparatingLineError(QoneError):
    """The left/right pole families overlap: no straight vertical contour
    separates them."""

    def __init__(self, message, left_max_re=None, right_min_re=None):
        super().__init__(message)
        self.left_max_re = left_max_re
        self.right_min_re = right_min_re


class DivergenceError(QoneError):
    """The requested integral is not absolutely convergent (empty window,
    or the quadrature detected a non-decaying integrand).

    `detail` names the offending monomial/shift when known.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class NotConvergedError(QoneError):
    """The panel budget was exhausted before reaching the tolerance."""


class HigherOrderPoleError(QoneError):
    """A residue was requested where the non-singular factor is itself
    singular, so the pole is not simple."""
