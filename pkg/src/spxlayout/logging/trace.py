"""Convergence-trace recording for optimizer runs."""

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, TextIO

TRACE_COLUMNS = ("iter", "crossings", "stress", "min_angle", "cost")


@dataclass(frozen=True)
class TraceEntry:
    """State of the layout at the start of one outer iteration."""

    iter: int
    crossings: int
    stress: float
    min_angle: float  # degrees
    cost: float


@dataclass
class TraceLogger:
    """Dual-format trace logger (CSV + JSON).

    CSV rows are streamed as entries arrive so partial traces survive an
    aborted run; the JSON document with run metadata is written on
    `finalize`. Both outputs contain no wall-clock data, so identical runs
    give identical files.
    """

    csv_path: Path | None = None
    json_path: Path | None = None
    run_name: str | None = None
    metadata: dict[str, Any] = field(default_factory=dict)
    _entries: list[TraceEntry] = field(default_factory=list, init=False, repr=False)
    _csv_file: TextIO | None = field(default=None, init=False, repr=False)
    _writer: Any = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.csv_path:
            self.csv_path.parent.mkdir(parents=True, exist_ok=True)
            self._csv_file = open(self.csv_path, "w", encoding="utf-8", newline="")  # noqa: SIM115
            self._writer = csv.writer(self._csv_file, lineterminator="\n")
            self._writer.writerow(TRACE_COLUMNS)
            self._csv_file.flush()

    def log(self, entry: TraceEntry) -> None:
        """Record one iteration."""
        self._entries.append(entry)
        if self._writer is not None and self._csv_file is not None:
            self._writer.writerow(
                [entry.iter, entry.crossings, entry.stress, entry.min_angle, entry.cost]
            )
            self._csv_file.flush()

    def get_entries(self) -> list[TraceEntry]:
        return self._entries.copy()

    def finalize(self) -> None:
        """Write the JSON document and close the CSV stream."""
        if self.json_path:
            self.json_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.json_path, "w", encoding="utf-8") as f:
                json.dump(
                    {
                        "run_name": self.run_name,
                        "metadata": self.metadata,
                        "total_iterations": len(self._entries),
                        "entries": [asdict(e) for e in self._entries],
                    },
                    f,
                    indent=2,
                )

        if self._csv_file:
            self._csv_file.close()
            self._csv_file = None
            self._writer = None

    def __enter__(self) -> "TraceLogger":
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: object,
    ) -> None:
        self.finalize()


def create_trace_paths(
    base_dir: Path,
    graph_name: str,
    run_id: str,
) -> tuple[Path, Path]:
    """CSV and JSON trace paths for a graph and run identifier.

    Args:
        base_dir: Directory holding traces.
        graph_name: Name of the graph, sanitized for the filename.
        run_id: Run identifier, e.g. "k1_adam_stress_0".

    Returns:
        Tuple of (csv_path, json_path).
    """
    safe_name = "".join(c if c.isalnum() or c in "-_" else "_" for c in graph_name)
    safe_run = "".join(c if c.isalnum() or c in "-_." else "_" for c in run_id)
    stem = f"{safe_name}_{safe_run}"
    return base_dir / f"{stem}.csv", base_dir / f"{stem}.json"
