"""Exception types raised by the zerosum package."""


class ZeroSumError(Exception):
    """Base class for all package errors."""


class InternalInconsistency(ZeroSumError):
    """A generated value failed its own defining check (indicates a bug)."""


class InvalidPartition(ZeroSumError, ValueError):
    pass


class IncompatibleRemainder(ZeroSumError, ValueError):
    pass


class BadOrder(ZeroSumError, ValueError):
    pass


class ArgumentOutOfRange(ZeroSumError, ValueError):
    pass


class ScaleRefused(ZeroSumError, ValueError):
    pass


class NotBalanced(ZeroSumError, ValueError):
    pass


class BudgetExceeded(ZeroSumError):
    """A direct subset scan would exceed its budget.

    ``report`` carries the partial AuditReport assembled before the refusal.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
