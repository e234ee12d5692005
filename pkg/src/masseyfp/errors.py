"""Exception types shared across the package."""


class MasseyFpError(Exception):
    pass


class DimensionMismatch(MasseyFpError, ValueError):
    pass


class SingularMatrixError(MasseyFpError, ValueError):
    pass


class BudgetExceeded(MasseyFpError):
    """A computation would exceed a configured size budget.

    This is never a mathematical verdict; ``dims`` records what was too big.
    """

    def __init__(self, message, **dims):
        super().__init__(message)
        self.dims = dims


class NotAGroupError(MasseyFpError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class HomomorphismError(MasseyFpError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotASubgroupError(MasseyFpError, ValueError):
    pass


class NotACocycleError(MasseyFpError, ValueError):
    pass


class UnsupportedCoefficients(MasseyFpError, ValueError):
    pass


class InvalidDefiningSystem(MasseyFpError, ValueError):
    pass


class NonAbelianKernelError(MasseyFpError, ValueError):
    pass


class PreconditionError(MasseyFpError, ValueError):
    """Hypotheses of a construction fail; ``reason`` names which one."""

    def __init__(self, message, reason, witness=None):
        super().__init__(message)
        self.reason = reason
        self.witness = witness
