"""Exception hierarchy shared by every module."""

from __future__ import annotations


class TheoryError(ValueError):
    """Base class for invalid theories, files and arguments."""


class ParseError(TheoryError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CycleError(TheoryError):
    pass


class UnresolvedComponent(TheoryError):
    pass


class FreshNameCollision(TheoryError):
    pass


class PreconditionError(TheoryError):
    """An algorithm was called on an input outside its domain."""


class NotParityDefinite(PreconditionError):
    def __init__(self, undefined):
        self.undefined = tuple(undefined)
        names = ", ".join(str(c) for c in self.undefined)
        super().__init__(f"open components with undefined parity: {names}")


class BudgetExceeded(TheoryError):
    pass
