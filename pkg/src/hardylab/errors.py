"""Exception hierarchy shared by every module."""


class HardyLabError(Exception):
    """Base class for domain errors raised by hardylab."""


class NonFiniteValue(HardyLabError):
    pass


class DimensionMismatch(HardyLabError):
    pass


class NotLocallyIntegrable(HardyLabError):
    pass


class IndeterminateDivergence(HardyLabError):
    pass


class BudgetExceeded(HardyLabError):
    pass


class UnsupportedShape(HardyLabError):
    pass


class InvalidExponent(HardyLabError):
    pass


class NotIntegrableOnBall(HardyLabError):
    pass


class UnboundedSupport(HardyLabError):
    pass


class DivergentNorm(HardyLabError):
    pass


class DegenerateInput(HardyLabError):
    pass


class DivergentNumerator(HardyLabError):
    pass


class FormatError(ValueError):
    """Malformed function or config document."""
