"""Exception types shared across the library and the CLI."""


class PopmatError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PopmatError):
    """Arguments outside an operation's domain (foreign elements, malformed specs)."""


class PreconditionError(PopmatError):
    """A documented precondition was violated by the caller."""


class InfeasibleError(PopmatError):
    """The instance admits no feasible candidate at all.

    Distinct from a legitimate "no popular solution exists" answer, which
    solvers report through their return value, never as an exception.
    """


class NoBaseError(InfeasibleError):
    """A requested base family turned out to be empty."""


class BudgetExceededError(PopmatError):
    """An enumeration exceeded its desk-scale budget; never a wrong answer."""


class SchemaError(PopmatError):
    """An instance or report document failed validation."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class LPError(PopmatError):
    """Internal exact LP solver failure."""


class LPInfeasibleError(LPError):
    pass


class LPUnboundedError(LPError):
    pass
