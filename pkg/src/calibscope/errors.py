"""Exception hierarchy shared by every calibscope module."""


class CalibError(ValueError):
    """Base class for all calibscope errors."""


class LengthError(CalibError):
    pass


class SimplexError(CalibError):
    pass


class DimensionError(CalibError):
    pass


class ArgumentError(CalibError):
    pass


class MissingLabelError(CalibError):
    pass


class MissingSoftLabelError(CalibError):
    pass


class SchemaError(CalibError):
    pass


class ParseError(CalibError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IoError(CalibError, OSError):
    pass
