"""Exception types shared by the corral modules."""


class CorralError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class BoundExceeded(CorralError):
    """A search or completion limit was hit before an answer was certified."""


class HilbertBoundExceeded(BoundExceeded):
    pass


class ConeDimensionExceeded(CorralError):
    pass


class NotWeaklyToric(CorralError):
    pass


class NotTorsionFree(CorralError):
    pass


class NotBTransverse(CorralError):
    pass


class NotCTransverse(CorralError):
    pass


class InvalidPoint(CorralError):
    pass


class InvalidMorphism(CorralError):
    pass


class ParseError(Exception):
    """Syntax or reference error in an input document (CLI exit code 2)."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)
