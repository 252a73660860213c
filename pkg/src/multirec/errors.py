"""Exception hierarchy shared by every layer of the package."""


class MultirecError(Exception):
    """Base class for all domain failures raised by multirec."""


class RankMismatch(MultirecError, ValueError):
    pass


class DomainError(MultirecError, ValueError):
    """A lattice point falls outside the region where coefficients are defined."""


class SingularMatrix(MultirecError, ArithmeticError):
    pass


class NotDiagonalizableOverField(MultirecError):
    pass


class ConvergenceFailure(MultirecError):
    pass


class NotCommuting(MultirecError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotConstant(MultirecError):
    pass


class NoInvertibleShift(MultirecError):
    pass


class DependentInitials(MultirecError):
    pass


class ZeroEigenvalue(MultirecError):
    pass


class IncompatibleSystem(MultirecError):
    """Raised when a construction detects that the compatibility conditions fail."""


class MissingInverse(MultirecError):
    pass
