"""
Exceptions raised by the certification library.

Each class carries the exit code the management commands report for it.
"""

from typing import Optional


class CertifyError(Exception):
    """Base class for every refusal or failure of the library"""
    exit_code = 1


class ParseError(CertifyError):
    """Malformed SFT, potential, pattern or shape text"""
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceLimitExceeded(CertifyError):
    """A projected or live cost went over the configured budget"""
    exit_code = 3

    def __init__(self, what: str, projected: int, limit: int, detail: str = ''):
        message = f"{what}: projected {projected} exceeds limit {limit}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)
        self.what = what
        self.projected = projected
        self.limit = limit


class UndecidedLanguage(CertifyError):
    """The language decision ran out of levels; nothing is certified"""
    exit_code = 4

    def __init__(self, pattern_repr: str, level: int):
        super().__init__(f"membership of {pattern_repr} undecided at level {level}")
        self.level = level


class EmptySubshift(CertifyError):
    """Z = 0 on a requested shape, so the pressure is -infinity"""
    exit_code = 5


class DimensionMismatch(CertifyError, ValueError):
    pass


class ShapeError(CertifyError, ValueError):
    pass


class MissingGap(CertifyError):
    """An operation needs the strong irreducibility gap and none was given"""


class InsufficientDomain(CertifyError, ValueError):
    pass


class InvalidPotential(CertifyError, ValueError):
    pass


class IntervalDomainError(CertifyError, ArithmeticError):
    """log of a nonpositive interval, or division by an interval containing 0"""


class PrecisionExhausted(CertifyError):
    pass


class OracleFailure(CertifyError):
    """A user supplied oracle raised or returned garbage"""


class MethodUnavailable(CertifyError):
    """The requested method does not apply to the given input"""
