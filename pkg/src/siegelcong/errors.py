"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage / parse / invalid argument -> 1,
insufficient precision -> 2, cache I/O -> 3.
"""


class SiegelCongError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(SiegelCongError, ValueError):
    """A caller-supplied argument violates a documented precondition."""


class RingMismatchError(SiegelCongError, TypeError):
    """Arithmetic attempted between series over different coefficient rings."""


class ArithmeticDomainError(SiegelCongError, ArithmeticError):
    """Inversion of a non-unit, or reduction of a non-p-integral rational."""


class PrecisionError(SiegelCongError):
    """A computation needs more stored coefficients than are available."""

    def __init__(self, message, required=None, available=None):
        super().__init__(message)
        self.required = required
        self.available = available


class DecompositionError(SiegelCongError):
    """Input is not in the weak span: division left a residual."""


class NotInRingError(SiegelCongError):
    """A coefficient vector is not expressible in the requested monomial span."""


class CacheIOError(SiegelCongError, OSError):
    """The expansion cache could not be read or written."""
