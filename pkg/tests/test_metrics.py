"""Tests for drawing metrics."""

import itertools

import numpy as np
import pytest

from spxlayout.graph.core import Graph, all_pairs_shortest_paths
from spxlayout.metrics import (
    MetricsReport,
    avg_crossing_angle,
    count_crossings,
    crossing_angles,
    drawing_metrics,
    min_crossing_angle,
    neighborhood_preservation,
    report,
    upward_fraction,
)

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def complete_graph(n: int) -> Graph:
    return Graph.from_pairs(n, list(itertools.combinations(range(n), 2)))


def random_graph(rng: np.random.Generator, n: int) -> Graph:
    pairs = [p for p in itertools.combinations(range(n), 2) if rng.random() < 0.4]
    return Graph.from_pairs(n, pairs)


def similarity(rng: np.random.Generator, layout: np.ndarray, reflect: bool = False) -> np.ndarray:
    angle = rng.uniform(0.0, 2.0 * np.pi)
    rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    if reflect:
        rotation = rotation @ np.diag([1.0, -1.0])
    return rng.uniform(0.1, 10.0) * layout @ rotation.T + rng.normal(scale=5.0, size=2)


def parametric_crossings(layout: np.ndarray, g: Graph) -> int:
    """Count proper crossings by solving p + t r = q + u s for every independent pair."""
    count = 0
    for e, f in itertools.combinations(g.edges, 2):
        if {e.source, e.target} & {f.source, f.target}:
            continue
        p, r = layout[e.source], layout[e.target] - layout[e.source]
        q, s = layout[f.source], layout[f.target] - layout[f.source]
        denom = r[0] * s[1] - r[1] * s[0]
        if denom == 0.0:
            continue
        qp = q - p
        t = (qp[0] * s[1] - qp[1] * s[0]) / denom
        u = (qp[0] * r[1] - qp[1] * r[0]) / denom
        if 0.0 < t < 1.0 and 0.0 < u < 1.0:
            count += 1
    return count


class TestCrossings:
    """Tests for crossing counts and angles."""

    def test_square_k4(self) -> None:
        """Test that the diagonals of a square cross once at a right angle."""
        k4 = complete_graph(4)

        assert count_crossings(SQUARE, k4) == 1
        assert crossing_angles(SQUARE, k4) == [pytest.approx(90.0)]

    def test_mixed_angles(self) -> None:
        """Test one 90 degree and one 45 degree crossing."""
        g = Graph.from_pairs(6, [(0, 1), (2, 3), (4, 5)])
        layout = np.array(
            [[0.0, 0.0], [4.0, 0.0], [1.0, -1.0], [1.0, 1.0], [2.0, -1.0], [4.0, 1.0]]
        )

        assert count_crossings(layout, g) == 2
        assert min_crossing_angle(layout, g) == pytest.approx(45.0)
        assert avg_crossing_angle(layout, g) == pytest.approx(67.5)

    def test_crossing_free(self) -> None:
        """Test the convention for drawings without crossings."""
        g = Graph.from_pairs(4, [(0, 1), (1, 2), (2, 3)])

        assert count_crossings(SQUARE, g) == 0
        assert crossing_angles(SQUARE, g) == []
        assert min_crossing_angle(SQUARE, g) == 90.0
        assert avg_crossing_angle(SQUARE, g) == 90.0

    def test_shared_endpoints_ignored(self) -> None:
        """Test that adjacent edges never count, even when collinear."""
        g = Graph.from_pairs(3, [(0, 1), (0, 2)])
        layout = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 0.0]])

        assert count_crossings(layout, g) == 0

    def test_matches_parametric_counter(self) -> None:
        """Test count_crossings against a direct intersection solve on random layouts."""
        rng = np.random.default_rng(40)
        total = 0
        for _ in range(200):
            n = int(rng.integers(4, 13))
            g = random_graph(rng, n)
            layout = rng.uniform(0.0, 1.0, size=(n, 2))

            expected = parametric_crossings(layout, g)

            assert count_crossings(layout, g) == expected
            total += expected

        assert total > 0

    @pytest.mark.parametrize("reflect", [False, True])
    def test_similarity_invariant(self, reflect: bool) -> None:
        """Test that rotating, scaling, shifting or mirroring keeps the crossing count."""
        rng = np.random.default_rng(41)
        for _ in range(20):
            g = random_graph(rng, 10)
            layout = rng.uniform(0.0, 1.0, size=(10, 2))

            moved = similarity(rng, layout, reflect=reflect)

            assert count_crossings(moved, g) == count_crossings(layout, g)

    def test_angles_invariant_under_rotation_and_scale(self) -> None:
        """Test that crossing angles survive rotation and uniform scaling."""
        rng = np.random.default_rng(42)
        for _ in range(20):
            g = random_graph(rng, 10)
            layout = rng.uniform(0.0, 1.0, size=(10, 2))

            moved = similarity(rng, layout)

            assert crossing_angles(moved, g) == pytest.approx(crossing_angles(layout, g), abs=1e-5)

    def test_min_at_most_average(self) -> None:
        """Test that the minimum crossing angle never exceeds the average."""
        rng = np.random.default_rng(43)
        for _ in range(50):
            g = random_graph(rng, 10)
            layout = rng.uniform(0.0, 1.0, size=(10, 2))

            assert min_crossing_angle(layout, g) <= avg_crossing_angle(layout, g) + 1e-9
            assert 0.0 < min_crossing_angle(layout, g) <= 90.0


class TestNeighborhoodPreservation:
    """Tests for neighborhood_preservation."""

    def test_square_cycle(self) -> None:
        """Test C4 on the unit square."""
        g = Graph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])

        assert neighborhood_preservation(SQUARE, g) == pytest.approx(1.0)

    def test_complete_graph(self) -> None:
        """Test that every layout of K_n scores one."""
        layout = np.random.default_rng(0).normal(size=(6, 2))

        assert neighborhood_preservation(layout, complete_graph(6)) == pytest.approx(1.0)

    def test_folded_path(self) -> None:
        """Test a P3 drawing whose end vertices are each other's nearest."""
        g = Graph.from_pairs(3, [(0, 1), (1, 2)])
        layout = np.array([[0.0, 0.0], [10.0, 0.0], [1.0, 0.0]])

        assert neighborhood_preservation(layout, g) == pytest.approx(1.0 / 3.0)

    def test_range(self) -> None:
        """Test that scores stay in [0, 1]."""
        g = Graph.from_pairs(8, [(i, i + 1) for i in range(7)])
        for seed in range(10):
            layout = np.random.default_rng(seed).normal(size=(8, 2))
            assert 0.0 <= neighborhood_preservation(layout, g) <= 1.0

    def test_too_small(self) -> None:
        """Test that a single vertex is rejected."""
        with pytest.raises(ValueError):
            neighborhood_preservation(np.zeros((1, 2)), Graph(n=1))

    def test_rotation_and_scale_invariant(self) -> None:
        """Test that only relative distances matter."""
        rng = np.random.default_rng(44)
        for _ in range(20):
            g = random_graph(rng, 10)
            layout = rng.normal(size=(10, 2))

            moved = similarity(rng, layout)

            assert neighborhood_preservation(moved, g) == pytest.approx(
                neighborhood_preservation(layout, g)
            )


class TestUpwardFraction:
    """Tests for upward_fraction."""

    def test_half(self) -> None:
        """Test one upward and one downward edge."""
        g = Graph.from_pairs(3, [(0, 1), (1, 2)], directed=True)
        layout = np.array([[0.0, 0.0], [0.0, 1.0], [0.0, 0.5]])

        assert upward_fraction(layout, g) == 0.5

    def test_horizontal_is_not_upward(self) -> None:
        """Test that equal heights do not count."""
        g = Graph.from_pairs(2, [(0, 1)], directed=True)

        assert upward_fraction(np.array([[0.0, 0.0], [1.0, 0.0]]), g) == 0.0

    def test_undirected(self) -> None:
        """Test graphs without directed edges."""
        g = Graph.from_pairs(2, [(0, 1)])

        assert upward_fraction(np.array([[0.0, 1.0], [0.0, 0.0]]), g) == 1.0


class TestReport:
    """Tests for the combined report."""

    def test_straight_path(self) -> None:
        """Test an exact drawing of P3."""
        g = Graph.from_pairs(3, [(0, 1), (1, 2)])
        layout = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])

        metrics = report(layout, g, all_pairs_shortest_paths(g))

        assert metrics.stress == 0.0
        assert metrics.crossings == 0
        assert metrics.neighborhood_preservation == pytest.approx(1.0)
        assert (metrics.drawing_width, metrics.drawing_height, metrics.drawing_area) == (
            2.0,
            0.0,
            0.0,
        )

    def test_consistent_with_functions(self) -> None:
        """Test that the report agrees with the individual metrics."""
        k4 = complete_graph(4)
        metrics = report(SQUARE, k4, all_pairs_shortest_paths(k4))
        box = drawing_metrics(SQUARE)

        assert metrics.crossings == count_crossings(SQUARE, k4)
        assert metrics.min_crossing_angle_deg == min_crossing_angle(SQUARE, k4)
        assert metrics.avg_crossing_angle_deg == avg_crossing_angle(SQUARE, k4)
        assert metrics.drawing_area == box.area
        assert metrics.upward_fraction == 1.0

    def test_json(self) -> None:
        """Test that the report serializes to a flat JSON object."""
        k4 = complete_graph(4)
        metrics = report(SQUARE, k4, all_pairs_shortest_paths(k4))

        restored = MetricsReport.model_validate_json(metrics.model_dump_json())

        assert restored == metrics
        assert set(metrics.model_dump()) == {
            "stress",
            "crossings",
            "min_crossing_angle_deg",
            "avg_crossing_angle_deg",
            "neighborhood_preservation",
            "drawing_width",
            "drawing_height",
            "drawing_area",
            "upward_fraction",
        }
