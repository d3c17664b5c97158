"""Exception types shared across the package.

Input-validation failures derive from :class:`ValidationError`; failures
raised from inside a numeric routine derive from :class:`NumericError`.
The CLI maps the first family to exit code 2 and the second to exit code 3.
"""


class QmonogamyError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(QmonogamyError, ValueError):
    """An input violates a documented invariant or precondition."""


class NumericError(QmonogamyError, ArithmeticError):
    """A numeric kernel received data it cannot process."""


class NotHermitian(NumericError):
    pass


class NotAntiHermitian(NumericError):
    pass


class NotPSD(NumericError):
    pass


class NonFinite(NumericError):
    pass


class StateError(ValidationError):
    """A state or density matrix fails one of its invariants."""


class DimensionTooSmall(ValidationError):
    pass


class WrongDims(ValidationError):
    pass


class WrongArity(ValidationError):
    pass


class RankInvalid(ValidationError):
    pass


class ConfigInvalid(ValidationError):
    pass


class EmptyKeep(ValidationError):
    pass


class FullKeep(ValidationError):
    pass
