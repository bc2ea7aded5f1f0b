"""Exception and warning types shared across the package."""


class ZetaSurgeryError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(ZetaSurgeryError, ValueError):
    pass


class DomainError(ZetaSurgeryError, ValueError):
    """Argument sits on a pole or outside the domain of a continuation."""


class AccuracyError(ZetaSurgeryError, ArithmeticError):
    """A requested accuracy cannot be certified."""


class SingularOperatorError(ZetaSurgeryError, ArithmeticError):
    """An operator that must be invertible has a non-positive mode."""


class DegenerateInputError(ZetaSurgeryError, ValueError):
    pass


class NumericError(ZetaSurgeryError, ArithmeticError):
    """An integrator or solver failed."""


class UnsupportedModelError(ZetaSurgeryError, ValueError):
    pass


class TruncationWarning(UserWarning):
    """A sum over an explicit, finite eigenvalue list may be truncated."""


class PositivityWarning(UserWarning):
    pass
