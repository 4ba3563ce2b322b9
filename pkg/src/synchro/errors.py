"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SynchroError(Exception):
    """Base class for all errors raised by this package."""


class MachineError(SynchroError, ValueError):
    """A malformed machine description or an out-of-range argument.

    ``line`` is the 1-based line of ``.tdx`` input that caused the error,
    when there is one.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TdxSyntaxError(MachineError):
    pass


class MissingTransition(MachineError):
    pass


class DuplicateTransition(MachineError):
    pass


class LetterOutOfRange(MachineError):
    pass


class DuplicateState(MachineError):
    pass


class UnknownState(MachineError):
    pass


class AlphabetMismatch(SynchroError, ValueError):
    pass


class NotInvertible(SynchroError):
    pass


class NotSynchronizing(SynchroError):
    pass


class NotSynchronizingAtLevel(NotSynchronizing):
    pass


class NotCore(SynchroError):
    pass


class CapExceeded(SynchroError):
    pass


class TooFewRecords(SynchroError, ValueError):
    pass


class UnknownName(SynchroError, KeyError):
    pass


class RequirementUnsatisfiable(SynchroError):
    pass


class CatalogError(SynchroError):
    """A catalog entry's declared properties disagree with recomputed ones."""
