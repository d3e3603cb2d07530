"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class CycleSpectraError(Exception):
    exit_code = 1


class ParseError(CycleSpectraError, ValueError):
    exit_code = 1


class DomainError(CycleSpectraError, ValueError):
    exit_code = 2


class SizeError(DomainError):
    """Matrix order outside the supported range."""


class ConvergenceError(CycleSpectraError, ArithmeticError):
    exit_code = 3


class BracketViolation(ConvergenceError):
    """An iterate left the interval that is guaranteed to contain the root."""


class BracketError(ConvergenceError):
    """No sign change on the requested bracket."""


class SingularShift(ConvergenceError):
    """A shift hit an eigenvalue closely enough to produce a vanishing pivot."""


class VerificationError(CycleSpectraError):
    exit_code = 4
