"""Exception types raised across the package."""


class FnInvError(Exception):
    """Base class for all package errors."""


class NonPrimeModulus(FnInvError, ValueError):
    pass


class SizeMismatch(FnInvError, ValueError):
    pass


class DomainError(FnInvError, ValueError):
    pass


class InfeasibleSystem(FnInvError, ValueError):
    """The linear system A x = v has no solution."""


class ScaleLimit(FnInvError, RuntimeError):
    """Exhaustive enumeration would exceed the configured cap."""


class SparsityViolation(FnInvError, ValueError):
    pass


class MalformedTree(FnInvError, ValueError):
    pass


class BudgetExceeded(FnInvError, RuntimeError):
    """A decoder issued more oracle queries than its declared budget."""


class ParameterError(FnInvError, ValueError):
    pass


# short alias
ParamError = ParameterError


class LinearityViolation(FnInvError, RuntimeError):
    pass


class SubProtocolBudget(FnInvError, RuntimeError):
    pass


class TooFewConditionedSamples(FnInvError, RuntimeError):
    pass


class ConfigError(FnInvError, ValueError):
    pass
