"""Exception hierarchy shared across the package."""


class LotkaFitError(Exception):
    """Base class for all package errors."""


class DomainError(LotkaFitError, ValueError):
    """Argument outside the domain where a function is defined (or finite)."""


class ParseError(LotkaFitError, ValueError):
    pass


class DuplicateXError(ParseError):
    pass


class EmptyInputError(LotkaFitError, ValueError):
    pass


class EmptyResultError(LotkaFitError, ValueError):
    pass


class InvalidParamsError(LotkaFitError, ValueError):
    pass


class ResourceError(LotkaFitError):
    pass


class DegenerateInputError(LotkaFitError, ValueError):
    pass


class ConvergenceError(LotkaFitError, RuntimeError):
    pass


class BoundaryError(ConvergenceError):
    """Cutoff maximizer ran to beta -> 0-; the power-law fit is the answer."""


class NestingViolationError(LotkaFitError, ValueError):
    pass


class NotConvergedError(LotkaFitError, ValueError):
    pass
