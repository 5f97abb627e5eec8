"""Exception hierarchy shared by every module."""


class TensCanonError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TensCanonError):
    """Malformed input text; carries a 1-based line/column position."""

    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if line is not None:
            where = f"{source + ':' if source else ''}{line}:{column}: "
        super().__init__(where + message)
        self.message = message


class DeclarationError(TensCanonError):
    """A tensor declaration that is inconsistent or refers to invalid slots."""


class ExpressionError(TensCanonError):
    """A tensor expression that violates the index conventions."""


class UsageError(TensCanonError, ValueError):
    """An operation was called outside its precondition."""


class ResourceError(TensCanonError):
    """A configured search or dimension cap was exceeded."""
