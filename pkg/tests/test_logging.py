"""Tests for convergence-trace logging."""

import csv
import json
import tempfile
from pathlib import Path

from spxlayout.logging.trace import (
    TRACE_COLUMNS,
    TraceEntry,
    TraceLogger,
    create_trace_paths,
)


def entry(i: int) -> TraceEntry:
    return TraceEntry(iter=i, crossings=3 - i, stress=10.0 / (i + 1), min_angle=30.0, cost=12.5)


class TestTraceEntry:
    """Tests for TraceEntry."""

    def test_entry_creation(self) -> None:
        """Test creating a trace entry."""
        e = TraceEntry(iter=4, crossings=2, stress=1.5, min_angle=45.0, cost=3.0)

        assert e.iter == 4
        assert e.crossings == 2
        assert e.min_angle == 45.0


class TestTraceLogger:
    """Tests for TraceLogger."""

    def test_init_no_files(self) -> None:
        """Test that an in-memory logger only collects entries."""
        logger = TraceLogger()
        logger.log(entry(0))
        logger.finalize()

        assert logger.csv_path is None
        assert logger.get_entries() == [entry(0)]

    def test_get_entries_is_copy(self) -> None:
        """Test that callers cannot mutate the recorded trace."""
        logger = TraceLogger()
        logger.log(entry(0))

        logger.get_entries().clear()

        assert len(logger.get_entries()) == 1

    def test_csv_streams(self) -> None:
        """Test that rows are on disk before finalize."""
        with tempfile.TemporaryDirectory() as tmpdir:
            csv_path = Path(tmpdir) / "sub" / "trace.csv"
            logger = TraceLogger(csv_path=csv_path)
            logger.log(entry(0))
            logger.log(entry(1))

            rows = list(csv.reader(csv_path.read_text(encoding="utf-8").splitlines()))
            logger.finalize()

        assert tuple(rows[0]) == TRACE_COLUMNS
        assert rows[0] == ["iter", "crossings", "stress", "min_angle", "cost"]
        assert len(rows) == 3
        assert rows[2][:2] == ["1", "2"]
        assert float(rows[2][2]) == 5.0

    def test_json_output(self) -> None:
        """Test the JSON document written on finalize."""
        with tempfile.TemporaryDirectory() as tmpdir:
            json_path = Path(tmpdir) / "trace.json"
            with TraceLogger(json_path=json_path, run_name="p4", metadata={"k": 2.0}) as logger:
                for i in range(3):
                    logger.log(entry(i))

            data = json.loads(json_path.read_text(encoding="utf-8"))

        assert data["run_name"] == "p4"
        assert data["metadata"] == {"k": 2.0}
        assert data["total_iterations"] == 3
        assert data["entries"][1] == {
            "iter": 1,
            "crossings": 2,
            "stress": 5.0,
            "min_angle": 30.0,
            "cost": 12.5,
        }

    def test_identical_runs_identical_files(self) -> None:
        """Test that traces carry no wall-clock data."""
        with tempfile.TemporaryDirectory() as tmpdir:
            outputs = []
            for name in ("a", "b"):
                csv_path, json_path = Path(tmpdir) / f"{name}.csv", Path(tmpdir) / f"{name}.json"
                with TraceLogger(csv_path=csv_path, json_path=json_path, run_name="run") as logger:
                    logger.log(entry(0))
                outputs.append((csv_path.read_bytes(), json_path.read_bytes()))

        assert outputs[0] == outputs[1]

    def test_finalize_twice(self) -> None:
        """Test that finalize can be called again after the context exits."""
        with tempfile.TemporaryDirectory() as tmpdir:
            logger = TraceLogger(csv_path=Path(tmpdir) / "t.csv")
            logger.finalize()
            logger.finalize()


class TestCreateTracePaths:
    """Tests for create_trace_paths."""

    def test_paths(self) -> None:
        """Test the naming scheme."""
        csv_path, json_path = create_trace_paths(Path("/tmp/traces"), "tree_d3", "k1.0_adam_0")

        assert csv_path == Path("/tmp/traces/tree_d3_k1.0_adam_0.csv")
        assert json_path == Path("/tmp/traces/tree_d3_k1.0_adam_0.json")

    def test_sanitizes(self) -> None:
        """Test that unsafe characters are replaced."""
        csv_path, _ = create_trace_paths(Path("out"), "my graph/1.txt", "run 1")

        assert csv_path.name == "my_graph_1_txt_run_1.csv"
