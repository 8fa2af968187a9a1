"""Exception hierarchy.

Validation errors are caller mistakes (exit code 1 in the CLI); numerical
diagnostics signal singular systems or broken invariants (exit code 2).
"""


class PlasmodeError(Exception):
    """Base class for all package errors."""


class ValidationError(PlasmodeError, ValueError):
    """Invalid geometry, material or configuration input."""


class DegenerateContrastError(ValidationError):
    """Adjacent permittivities coincide, so the interface contrast is undefined."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"eps[{index - 1}] == eps[{index}]: contrast at interface {index} is undefined")


class PoleError(ValidationError):
    """The requested contrast maps to an unbounded permittivity."""


class EnumerationSizeError(ValidationError):
    """Explicit enumeration requested beyond its size cap."""


class NumericalDiagnostic(PlasmodeError):
    """A numerical invariant failed or a system could not be solved."""


class SingularSystemError(NumericalDiagnostic):
    """The transmission system is singular: the configuration sits on a plasmon mode."""

    def __init__(self, message, nearest_lambda=None):
        self.nearest_lambda = nearest_lambda
        if nearest_lambda is not None:
            message = f"{message} (nearest mode lambda = {nearest_lambda!r})"
        super().__init__(message)


class TheoremViolation(NumericalDiagnostic):
    """A computed root or eigenvalue left the region where it must lie."""


class ConvergenceError(NumericalDiagnostic):
    """An iterative solver hit its iteration cap."""
