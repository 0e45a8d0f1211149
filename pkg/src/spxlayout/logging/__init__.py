"""Convergence-trace logging."""

from spxlayout.logging.trace import (
    TRACE_COLUMNS,
    TraceEntry,
    TraceLogger,
    create_trace_paths,
)

__all__ = [
    "TRACE_COLUMNS",
    "TraceEntry",
    "TraceLogger",
    "create_trace_paths",
]
