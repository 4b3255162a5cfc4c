"""Exception types raised by the library."""


class CasimirError(Exception):
    """Base class for every error raised by thermocasimir."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the domain of the operation."""


class ValidationError(CasimirError, ValueError):
    """Invalid input data (material parameters, optical tables, settings).

    ``line`` carries the 1-based line number when the data came from a file.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SingularModelError(CasimirError, ValueError):
    """The requested model is singular for the given parameters (e.g. zero relaxation)."""


class DivergentPermittivityError(CasimirError, ValueError):
    """The dielectric function diverges at zero frequency.

    Raised instead of returning infinity; the zero-frequency Matsubara term
    has to be handled by an explicit zero-frequency prescription.
    """


class WrongModelError(CasimirError, TypeError):
    """A model of the wrong family was passed (impedance vs dielectric)."""


class IndeterminateLimitError(CasimirError, ValueError):
    """The 0/0 limit of the impedance reflection coefficients at zero frequency."""


class UnresolvedPrescriptionError(CasimirError, ValueError):
    """``Auto`` cannot pick a zero-frequency prescription for this model."""


class ConvergenceError(CasimirError, RuntimeError):
    """A quadrature or Matsubara sum did not converge.

    ``partial`` holds the best estimate available when the iteration stopped.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
