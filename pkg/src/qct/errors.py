"""Exception hierarchy shared by every qct module."""


class QctError(Exception):
    """Base class for all library errors."""


class GraphError(QctError, ValueError):
    """Malformed graph input (bad endpoint, bad vertex set, ...)."""


class NotATournament(GraphError):
    pass


class NotStronglyConnected(GraphError):
    pass


class NotTransitive(GraphError):
    pass


class CapExceeded(QctError):
    """A construction would exceed a configured size cap.

    ``required`` carries the exact size that was asked for.
    """

    def __init__(self, message, required=None, cap=None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class BudgetExceeded(QctError):
    """A search ran out of nodes.  ``partial`` holds anything found so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []


class NotAPolymorphism(QctError):
    pass


class EngineRefused(QctError):
    pass


class SentenceSyntaxError(QctError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class PaperCheckFailure(QctError):
    """An invariant that a proved statement guarantees was observed to fail."""
