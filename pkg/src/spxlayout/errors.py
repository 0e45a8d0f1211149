"""Exception hierarchy and CLI exit codes."""

from enum import IntEnum


class SPXError(Exception):
    """Base exception for all layout errors."""


class DataError(SPXError):
    """The input graph, layout or file is unusable."""


class RuntimeFailure(SPXError):
    """A computation could not be completed."""


class InvalidGraph(DataError):
    """Graph violates a structural invariant (range, self-loop, duplicate edge)."""


class DisconnectedGraph(DataError):
    """Some vertex pair is unreachable, so stress is undefined."""


class NotADag(DataError):
    """The directed subgraph contains a cycle."""


class DegenerateSegment(DataError):
    """A segment has zero length."""


class LayoutFileError(DataError):
    """A layout file is malformed or does not match its graph."""


class ParseError(DataError):
    """Graph text could not be parsed.

    Carries the 1-based line and column of the offending token.
    """

    def __init__(self, line: int, column: int, message: str) -> None:
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class GenerationFailed(RuntimeFailure):
    """A random generator exhausted its retry budget."""


class SingularSystem(RuntimeFailure):
    """The weighted Laplacian system could not be solved."""


class LPFailure(RuntimeFailure):
    """The simplex solver exceeded its pivot budget."""


class NonFiniteUpdate(RuntimeFailure):
    """A gradient step produced NaN or infinite coordinates."""


class CoincidentVertices(RuntimeFailure):
    """Two vertices share a position where a direction is required."""

    def __init__(self, pairs: list[tuple[int, int]]) -> None:
        self.pairs = pairs
        shown = ", ".join(f"({i}, {j})" for i, j in pairs[:5])
        more = f" and {len(pairs) - 5} more" if len(pairs) > 5 else ""
        super().__init__(f"coincident vertices: {shown}{more}")


class ExitCode(IntEnum):
    """Exit codes for the command line."""

    SUCCESS = 0
    USAGE_ERROR = 1
    DATA_ERROR = 2
    RUNTIME_FAILURE = 3


def exit_code_for(error: BaseException) -> ExitCode:
    """Map an exception to the exit code the CLI reports for it.

    Args:
        error: The exception raised by a sub-command.

    Returns:
        DATA_ERROR for bad input, RUNTIME_FAILURE for everything else.
    """
    if isinstance(error, DataError | FileNotFoundError):
        return ExitCode.DATA_ERROR
    return ExitCode.RUNTIME_FAILURE
