"""Exception hierarchy.

Everything raised on purpose by this package derives from FgIndexError, so
callers can catch one type at the CLI boundary and map it to an exit code.
"""


class FgIndexError(Exception):
    """Base class for all errors raised by fgindex."""


class ParseError(FgIndexError):
    """Malformed word or automorphism text."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyInput(FgIndexError):
    """An operation that needs a nonempty word received the empty word."""


class NotPositive(FgIndexError):
    """A generator image contains an inverse letter or is empty."""


class NotInverse(FgIndexError):
    """The supplied inverse substitution does not invert the forward one."""


class NotPrimitive(FgIndexError):
    """The incidence matrix has no strictly positive power."""


class BudgetExceeded(FgIndexError):
    """The letter budget ran out; results so far are valid but partial."""


class UndefinedShift(FgIndexError):
    """Shift requested in a direction where the development has no letters."""


class CapExceeded(FgIndexError):
    """A fixing-power search passed its cap without success."""


class FormulaMismatch(FgIndexError):
    """The two index formulas disagree; indicates an internal bug."""


class VerificationFailed(FgIndexError):
    """A claimed fixed word is not actually fixed."""


class InvariantViolation(FgIndexError):
    """A structural invariant that should always hold was observed broken."""
