class FreeEulerError(Exception):
    """Base class for errors raised by this package."""


class GeneratorMismatchError(FreeEulerError, ValueError):
    """Operands live over different numbers of generators."""


class ModeMismatchError(FreeEulerError, TypeError):
    """An exact-mode value met a float-mode value."""


class ResourceLimitError(FreeEulerError):
    """A configured size cap would be exceeded."""


class NotDivergenceFreeError(FreeEulerError, ValueError):
    """A field required to be divergence-free is not."""


class NotGradientError(FreeEulerError, ValueError):
    """A field is not in the range of the cyclic gradient."""


class InstabilityError(FreeEulerError, RuntimeError):
    """A time step left the admissible set (non-finite or divergent)."""


class ParseError(FreeEulerError, ValueError):
    def __init__(self, message, text="", pos=None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)
