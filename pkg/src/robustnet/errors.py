from typing import Optional


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_NUMERIC = 4


class RobustnetError(Exception):
    exit_code = EXIT_USAGE


class GraphParseError(RobustnetError, ValueError):
    exit_code = EXIT_PARSE

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VertexRangeError(GraphParseError):
    pass


class SelfLoopError(GraphParseError):
    pass


class InvalidFamilyError(RobustnetError, ValueError):
    pass


class DomainError(RobustnetError, ValueError):
    pass


class InvalidEdgeError(DomainError):
    """Self-loop or out-of-range vertex passed to a graph constructor or edit."""


class UndefinedMeasureError(DomainError):
    """Measure has no value on this graph (rendered as "-")."""


class CapacityError(RobustnetError):
    exit_code = EXIT_CAPACITY


class NumericError(RobustnetError, ArithmeticError):
    exit_code = EXIT_NUMERIC


class UsageError(RobustnetError):
    """Bad command line or unknown measure name."""
