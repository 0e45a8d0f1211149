"""Tests for graph files, layout files and SVG rendering."""

import itertools
import json
import tempfile
from pathlib import Path

import numpy as np
import pytest

from spxlayout.errors import LayoutFileError, ParseError
from spxlayout.graph.core import Edge, Graph, all_pairs_shortest_paths
from spxlayout.graph.generators import generate_random_dag
from spxlayout.io import (
    SvgOptions,
    dump_layout,
    parse_graph,
    parse_layout,
    read_graph,
    read_layout,
    render_svg,
    save_graph,
    write_graph,
    write_layout,
)
from spxlayout.metrics import report


class TestGraphFile:
    """Tests for the plain-text graph format."""

    def test_parse(self) -> None:
        """Test comments, blank lines and both edge forms."""
        text = "# sample\n\nn 3\n0 1  # first\n1 > 2\n"

        g = parse_graph(text)

        assert g.n == 3
        assert g.edges == (Edge(0, 1, False), Edge(1, 2, True))

    def test_write(self) -> None:
        """Test the normalized output."""
        g = Graph(n=3, edges=(Edge(0, 1, False), Edge(2, 1, True)))

        assert write_graph(g) == "n 3\n0 1\n2 > 1\n"

    def test_round_trip_generated(self) -> None:
        """Test that a generated DAG survives write and parse."""
        g = generate_random_dag(12, 1.5, seed=2)

        assert parse_graph(write_graph(g)) == g

    def test_edgeless(self) -> None:
        """Test a header without edges."""
        g = parse_graph("n 1\n")

        assert g.n == 1
        assert g.m == 0

    @pytest.mark.parametrize(
        "text,line,column",
        [
            ("", 1, 1),
            ("m 3\n", 1, 1),
            ("n 3\n0 x\n", 2, 3),
            ("n 3\n0 5\n", 2, 3),
            ("n 3\n1 1\n", 2, 1),
            ("n 3\n0 1\n1 0\n", 3, 1),
            ("n 3\n0 1 2\n", 2, 3),
            ("n 0\n", 1, 3),
        ],
    )
    def test_errors(self, text: str, line: int, column: int) -> None:
        """Test that parse errors carry the offending position."""
        with pytest.raises(ParseError) as excinfo:
            parse_graph(text)

        assert (excinfo.value.line, excinfo.value.column) == (line, column)
        assert str(excinfo.value).startswith(f"line {line}, column {column}: ")

    def test_files(self) -> None:
        """Test save_graph and read_graph."""
        g = Graph.from_pairs(4, [(0, 1), (1, 2), (2, 3)], directed=True)
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "nested" / "g.txt"
            save_graph(path, g)

            assert read_graph(path) == g


class TestLayoutFile:
    """Tests for JSON layout files."""

    def test_dump_and_parse(self) -> None:
        """Test coordinates, metrics and config in one document."""
        g = Graph.from_pairs(4, list(itertools.combinations(range(4), 2)))
        layout = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        metrics = report(layout, g, all_pairs_shortest_paths(g))

        text = dump_layout(layout, metrics=metrics, config={"k": 2.0})
        document = json.loads(text)

        assert document["n"] == 4
        assert document["coords"][2] == [1.0, 1.0]
        assert document["metrics"]["crossings"] == 1
        assert document["config"] == {"k": 2.0}
        assert np.array_equal(parse_layout(text, n=4), layout)

    def test_optional_fields_omitted(self) -> None:
        """Test that absent metrics and config are not written."""
        document = json.loads(dump_layout(np.zeros((2, 2))))

        assert set(document) == {"n", "coords"}

    def test_vertex_count_mismatch(self) -> None:
        """Test that n must match the graph."""
        text = dump_layout(np.zeros((3, 2)))

        with pytest.raises(LayoutFileError):
            parse_layout(text, n=4)

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            '{"coords": [[0, 0]]}',
            '{"n": 2, "coords": [[0, 0]]}',
            '{"n": 1, "coords": [[0, 0, 0]]}',
            '{"n": 1, "coords": [["a", 0]]}',
        ],
    )
    def test_malformed(self, text: str) -> None:
        """Test that malformed documents raise LayoutFileError."""
        with pytest.raises(LayoutFileError):
            parse_layout(text)

    def test_files(self) -> None:
        """Test write_layout and read_layout."""
        layout = np.array([[0.5, -1.25], [3.0, 2.0]])
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "out" / "layout.json"
            write_layout(path, layout)

            assert np.array_equal(read_layout(path, n=2), layout)


class TestSvg:
    """Tests for render_svg."""

    def test_single_edge(self) -> None:
        """Test one line and two circles."""
        g = Graph.from_pairs(2, [(0, 1)])

        svg = render_svg(np.array([[0.0, 0.0], [1.0, 1.0]]), g)

        assert svg.startswith("<svg ")
        assert svg.rstrip().endswith("</svg>")
        assert svg.count("<line") == 1
        assert svg.count("<circle") == 2
        assert "<marker" not in svg

    def test_arrowheads(self) -> None:
        """Test that directed edges get a marker."""
        g = Graph.from_pairs(2, [(0, 1)], directed=True)

        svg = render_svg(np.array([[0.0, 0.0], [0.0, 1.0]]), g)

        assert "<marker" in svg
        assert "marker-end='url(#arrow)'" in svg

    def test_highlight_crossings(self) -> None:
        """Test that crossing edges take the highlight color."""
        g = Graph.from_pairs(4, list(itertools.combinations(range(4), 2)))
        layout = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        options = SvgOptions(highlight_crossings=True)

        highlighted = render_svg(layout, g, options)
        plain = render_svg(layout, g)

        assert highlighted.count(options.crossing_color) == 2
        assert options.crossing_color not in plain

    def test_deterministic(self) -> None:
        """Test that rendering is a pure function of its inputs."""
        g = generate_random_dag(8, 1.5, seed=1)
        layout = np.random.default_rng(3).normal(size=(8, 2))

        assert render_svg(layout, g) == render_svg(layout, g)
