"""Shared exception types. The CLI maps these onto exit codes."""


class ValidationError(ValueError):
    """Bad input: parameters, configuration, file contents. CLI exit code 1."""


class NumericError(RuntimeError):
    """Computation failed or would produce non-finite output. CLI exit code 2."""


class PoleError(NumericError):
    """An undamped resonance sits exactly on the frequency grid."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class KindMismatchError(ValidationError):
    """Operation applied to an FRF of the wrong kind."""


class BandSelectionError(ValidationError):
    """The analysis band does not isolate a resonance the way the caller asserted."""


class DegenerateGeometryError(NumericError):
    """Point set admits no circle (collinear or too few distinct points)."""


class UffParseError(ValidationError):
    """Malformed UFF dataset text. Carries the 1-based line number."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = "line %d: %s" % (line_number, message)
        super().__init__(message)
        self.line_number = line_number
