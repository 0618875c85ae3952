"""Exception hierarchy shared by every prefkit module.

All errors derive from :class:`PrefkitError` so that the command line can map
them onto a single "input error" exit code, while library users can still
catch the precise failure they care about.
"""

from __future__ import annotations


class PrefkitError(Exception):
    """Base class for all errors raised by prefkit."""


class FormulaSyntaxError(PrefkitError, ValueError):
    """A formula string could not be parsed.

    Attributes
    ----------
    position:
        Zero-based character offset at which parsing failed.
    """

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownAtomError(PrefkitError, ValueError):
    """A formula mentions an atom that is not part of the vocabulary."""

    def __init__(self, atom: str) -> None:
        super().__init__(f"unknown atom {atom!r}")
        self.atom = atom


class VocabularyError(PrefkitError, ValueError):
    """A vocabulary is malformed (duplicate atoms, too many atoms, ...)."""


class DomainMissError(PrefkitError, KeyError):
    """A set needed for an evaluation is not part of the domain family."""

    def __init__(self, missing: int, message: str | None = None) -> None:
        self.missing = missing
        super().__init__(message or f"set {missing:#b} is not in the domain")

    def __str__(self) -> str:  # KeyError quotes its argument; keep it readable
        return str(self.args[0])


class ClosureError(PrefkitError, ValueError):
    """A domain family lacks a closure property that an operation requires."""


class EnumerationCapError(PrefkitError, ValueError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, count: int, cap: int) -> None:
        super().__init__(f"enumeration of {count} objects exceeds the cap of {cap}")
        self.count = count
        self.cap = cap


class BudgetExceededError(PrefkitError, RuntimeError):
    """A bounded search ran out of budget before it could decide its question.

    This is deliberately distinct from an unsatisfiable answer: it says nothing
    about whether a solution exists.
    """


class NotRankedError(PrefkitError, ValueError):
    """A structure is not ranked (or not cycle-free), so it has no layers."""

    def __init__(self, message: str, witness: tuple | None = None) -> None:
        super().__init__(message)
        self.witness = witness


class InputError(PrefkitError, ValueError):
    """Malformed JSON input or inconsistent declared data."""


class PreconditionError(PrefkitError, ValueError):
    """An input is well formed but lacks a property the operation requires."""
