"""Exception hierarchy shared by every polymix module."""


class PolymixError(Exception):
    """Base class for all errors raised by polymix."""


class DomainError(PolymixError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class CatalogError(DomainError):
    """Unknown catalog name or a parameter list of the wrong length."""


class ParseError(DomainError):
    """A distribution spec or grid spec could not be parsed.

    ``position`` is the 0-based character offset of the offending token in the
    whitespace-stripped input.
    """

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ConvergenceError(PolymixError, ArithmeticError):
    """An iterative or series evaluation failed to reach its tolerance."""


class IntegrationError(ConvergenceError):
    """Adaptive quadrature exhausted its refinement budget."""


class TailUnderflowError(ConvergenceError):
    """The survival function underflowed to zero, so the hazard is undefined."""
