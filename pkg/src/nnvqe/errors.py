"""Exception hierarchy shared by every layer of the package."""


class NNVQEError(Exception):
    """Base class for all errors raised by nnvqe."""


class ConfigurationError(NNVQEError, ValueError):
    """An argument or config value is outside its allowed range."""


class StructuralError(NNVQEError, ValueError):
    """Shapes, lengths or qubit indices do not fit together."""


class UsageError(NNVQEError, RuntimeError):
    """An operation was called in a state where it is not defined."""


class DomainError(NNVQEError, ValueError):
    """A math function was evaluated outside its domain."""


class ResourceError(NNVQEError, MemoryError):
    """The request would need more memory than we allow."""


class NumericalError(NNVQEError, ArithmeticError):
    """A computation produced a non-finite or inconsistent number."""

    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch
