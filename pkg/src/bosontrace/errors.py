"""Exceptions raised by the numerical routines."""


class BosonTraceError(Exception):
    """Base class for all package errors."""


class DivergentError(BosonTraceError):
    """A trace or integral was requested outside its convergence region."""


class BranchPointError(BosonTraceError):
    """A square-root continuation path came too close to a zero."""


class NoConvergenceError(BosonTraceError):
    """An iterative refinement failed to reach its tolerance."""


class NotConvergedError(BosonTraceError):
    """A truncated oracle did not stabilise under truncation doubling."""


class SingularMatrixError(BosonTraceError):
    """The projector parameter sits on a pole of the generating function."""


class DecompositionSingularError(BosonTraceError):
    """The element has no Gauss (K+ K3 K-) factorization."""


class QuadratureError(BosonTraceError):
    """Numerical integration could not certify its tail bound."""


class TruncationTooLargeError(BosonTraceError):
    """The requested Fock truncation exceeds the memory guard."""
