"""Exception hierarchy shared by all modules."""


class SdofError(Exception):
    """Base class for every error raised by :mod:`sdofbounds`."""


class InvalidConfig(SdofError, ValueError):
    """An antenna configuration violates its invariants."""

    def __init__(self, field, value, reason):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r}: {reason}")


class NonPositiveAntennaCount(InvalidConfig):
    pass


class NegativeRisBudget(InvalidConfig):
    pass


class DimensionMismatch(SdofError, ValueError):
    pass


class PlanOutOfBounds(SdofError, ValueError):
    pass


class InfeasiblePlan(SdofError, ValueError):
    pass


class SingularSystem(SdofError, ArithmeticError):
    pass


class RankMismatch(SdofError, ArithmeticError):
    pass


class DegenerateChannels(SdofError, ArithmeticError):
    pass


class SolverDiverged(SdofError, ArithmeticError):
    pass


class IdentityViolation(SdofError, AssertionError):
    pass
