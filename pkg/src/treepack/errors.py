"""Exception taxonomy: bad inputs vs. provably-empty solution spaces vs. blown guards."""


class TreePackError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TreePackError, ValueError):
    """An argument is invalid or a documented precondition is violated."""


class DimensionError(DomainError):
    """Operands whose sizes must agree do not."""


class InfeasibleError(TreePackError):
    """The input is valid but the requested object provably does not exist."""


class ResourceGuardError(TreePackError):
    """An exhaustive operation refused to run: the instance exceeds its size guard."""


class InternalInvariantError(TreePackError):
    """A computed object failed its own postcondition check; this is a bug, not user error."""
