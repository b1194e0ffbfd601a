"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A side input (tree decomposition, rotation system) is malformed."""


class ParseError(ValueError):
    """A file could not be parsed; carries the offending line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class InvariantError(RuntimeError):
    """An internal invariant the algorithms rely on was violated."""


class TraceIntegrityError(RuntimeError):
    """A decomposition trace does not replay to its recorded contents."""


class MinorParameterWarning(UserWarning):
    """The declared minor parameter r is too small for the input graph."""
