"""Exception hierarchy shared by all modules."""


class ReparamError(Exception):
    """Base class for library errors."""


class DomainError(ReparamError, ValueError):
    """Argument outside the domain where an operation is defined."""


class ConvergenceError(ReparamError, ArithmeticError):
    """A quadrature, root-finder or limit estimate failed to converge."""


class StepSizeUnderflow(ReparamError, ArithmeticError):
    """Adaptive step dropped below the minimum admissible size."""


class BlowUpError(ReparamError, ArithmeticError):
    """The integrated state became non-finite."""
