"""Exception types shared across the library."""


class ZeronessError(Exception):
    """Base class for all library errors."""


class ContextMismatch(ZeronessError):
    """Operands live in different variable contexts."""


class ArityMismatch(ZeronessError):
    """A point or image map does not cover the expected variables."""


class ResourceLimitExceeded(ZeronessError):
    """A configurable resource cap was hit; the computation is inconclusive,
    not wrong.  Raise the caps and retry."""

    def __init__(self, cap, value, limit):
        super().__init__(f"resource cap '{cap}' exceeded: {value} > {limit}")
        self.cap = cap
        self.value = value
        self.limit = limit


class NotWellPosed(ZeronessError):
    """An implicit system violates the well-posedness conditions
    (nonzero value at the origin, or non-nilpotent Jacobian)."""


class NotComposable(ZeronessError):
    """A strong-composition precondition is violated."""


class NotStandardForm(ZeronessError):
    """A process definition is not in standard form, or has a
    non-productive nonterminal."""


class ConstraintError(ZeronessError):
    """A support constraint is malformed or dimension-inconsistent."""


class ParseError(ZeronessError):
    """A text input (polynomial, model file) could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SoundnessError(ZeronessError):
    """An internal consistency check failed; this indicates a bug,
    not a user error."""
