"""Exception types raised by ratgabor."""


class RatGaborError(Exception):
    """Base class for all library errors."""


class TailNotSummable(RatGaborError):
    """A window envelope is too weak to certify a requested truncation tolerance."""


class DomainError(RatGaborError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ParityError(DomainError):
    """An operation that needs a symmetric window got one with the wrong parity."""


class NotHermitian(RatGaborError, ValueError):
    pass


class ConvergenceFailure(RatGaborError, ArithmeticError):
    pass
