class LabyrinthError(Exception):
    """Base class for errors raised by this package."""


class FormatError(LabyrinthError, ValueError):
    """Malformed pattern, plan, map or trace text."""

    def __init__(self, message, lineno=None, source=None):
        self.message = message
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


class InvalidPatternError(LabyrinthError, ValueError):
    """An operation needs a labyrinth pattern and got something else."""


class ConsistencyError(LabyrinthError):
    """A construction plan violates the collection or tree consistency checks."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class GridCapError(LabyrinthError):
    """The requested level would exceed the configured grid size."""


class InvariantViolation(LabyrinthError, AssertionError):
    """A guaranteed structural fact failed; always an input or implementation bug."""
