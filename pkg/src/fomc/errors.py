"""Exception types shared across the package."""


class ModelCheckError(Exception):
    """Base class for all errors raised by this package."""


class VocabularyError(ModelCheckError):
    """A symbol is unknown, duplicated, or used at the wrong arity."""


class StructureError(ModelCheckError):
    """A structure violates its validity constraints."""


class AssignmentError(ModelCheckError):
    """An assignment is missing a variable or is otherwise malformed."""


class PreconditionError(ModelCheckError):
    """An operation was invoked outside its supported input class."""


class UnsupportedFeatureError(PreconditionError):
    """The input uses a feature this routine deliberately does not handle."""


class ParseError(ModelCheckError):
    """Text input could not be parsed; carries the offending position."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class BudgetExceeded(ModelCheckError):
    """An accounted-cost budget was exhausted before the run finished."""
