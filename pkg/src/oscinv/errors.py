"""Exception hierarchy shared by all oscinv modules."""


class OscinvError(Exception):
    """Base class for every error raised by oscinv."""


class OutOfDomainError(OscinvError, ValueError):
    """A time lies outside the domain of a profile or the span of a mode."""


class IntegrationError(OscinvError, RuntimeError):
    """The ODE integrator gave up (step-size collapse or similar)."""

    def __init__(self, message, last_t=None):
        super().__init__(message)
        self.last_t = last_t


class DegenerateModeError(OscinvError, ValueError):
    """A mode cannot be Wronskian-normalized."""


class ContractError(OscinvError, ValueError):
    """An input violates the documented precondition of an operation."""


class AccuracyError(OscinvError, RuntimeError):
    """A numerical estimate failed its own convergence test."""


class WavefunctionRangeError(OscinvError, OverflowError):
    """Wavefunction evaluation would overflow or produce non-finite values."""


class UnsupportedSignatureError(OscinvError, ValueError):
    """The quadratic invariant is not positive definite (B <= |A|)."""


class SingularityError(OscinvError, ValueError):
    """An auxiliary quantity hits a zero or a non-positive coefficient."""


class ConfigError(OscinvError, ValueError):
    """A run configuration failed to parse or validate."""
