"""Tests for segment predicates and bounding boxes."""

import math

import numpy as np
import pytest

from spxlayout.errors import DegenerateSegment
from spxlayout.geometry import (
    BoundingBox,
    Segment,
    bounding_box,
    crossing_angle,
    crossing_cosines_many,
    segments_cross,
    segments_cross_many,
)


def seg(x1: float, y1: float, x2: float, y2: float) -> Segment:
    return Segment.from_coords((x1, y1), (x2, y2))


def parametric_cross(a: Segment, b: Segment) -> bool:
    """Solve p + s r = q + t w and require both parameters strictly inside (0, 1)."""
    r = np.array(a.direction)
    w = np.array(b.direction)
    denom = r[0] * w[1] - r[1] * w[0]
    if denom == 0.0:
        return False
    offset = np.array([b.p.x - a.p.x, b.p.y - a.p.y])
    s = (offset[0] * w[1] - offset[1] * w[0]) / denom
    t = (offset[0] * r[1] - offset[1] * r[0]) / denom
    return bool(0.0 < s < 1.0 and 0.0 < t < 1.0)


def atan2_angle(a: Segment, b: Segment) -> float:
    ax, ay = a.direction
    bx, by = b.direction
    diff = abs(math.atan2(ay, ax) - math.atan2(by, bx)) % math.pi
    return min(diff, math.pi - diff)


class TestSegmentsCross:
    """Tests for segments_cross."""

    def test_x_configuration(self) -> None:
        """Test two diagonals of the unit square."""
        assert segments_cross(seg(0, 0, 1, 1), seg(0, 1, 1, 0))

    def test_parallel(self) -> None:
        """Test parallel horizontal segments."""
        assert not segments_cross(seg(0, 0, 1, 0), seg(0, 1, 1, 1))

    @pytest.mark.parametrize(
        "a,b",
        [
            (seg(0, 0, 1, 0), seg(1, 0, 2, 1)),  # shared endpoint
            (seg(0, 0, 2, 0), seg(1, 0, 1, 1)),  # T-junction
            (seg(0, 0, 2, 0), seg(1, 0, 3, 0)),  # collinear overlap
            (seg(0, 0, 1, 0), seg(2, -1, 2, 1)),  # disjoint
        ],
    )
    def test_touching_is_not_crossing(self, a: Segment, b: Segment) -> None:
        """Test that only proper interior intersections count."""
        assert not segments_cross(a, b)

    def test_matches_parametric_oracle(self) -> None:
        """Test agreement with the parametric solve on random pairs."""
        rng = np.random.default_rng(11)
        points = rng.uniform(-1.0, 1.0, size=(5000, 4, 2))
        for p in points:
            a = Segment.from_coords(p[0], p[1])
            b = Segment.from_coords(p[2], p[3])
            assert segments_cross(a, b) == parametric_cross(a, b)

    def test_vectorized_agrees(self) -> None:
        """Test that segments_cross_many matches the scalar predicate."""
        rng = np.random.default_rng(12)
        p = rng.uniform(-1.0, 1.0, size=(500, 4, 2))
        many = segments_cross_many(p[:, 0], p[:, 1], p[:, 2], p[:, 3])
        scalar = [
            segments_cross(Segment.from_coords(q[0], q[1]), Segment.from_coords(q[2], q[3]))
            for q in p
        ]

        assert many.tolist() == scalar

    def test_invariant_under_similarity(self) -> None:
        """Test that rotation, scaling and translation keep the answer."""
        rng = np.random.default_rng(13)
        angle = 0.7
        cos, sin = math.cos(angle), math.sin(angle)
        rotation = np.array([[cos, -sin], [sin, cos]])
        for p in rng.uniform(-1.0, 1.0, size=(200, 4, 2)):
            moved = 3.5 * p @ rotation.T + np.array([10.0, -4.0])
            original = segments_cross(
                Segment.from_coords(p[0], p[1]), Segment.from_coords(p[2], p[3])
            )
            transformed = segments_cross(
                Segment.from_coords(moved[0], moved[1]), Segment.from_coords(moved[2], moved[3])
            )
            assert original == transformed


class TestCrossingAngle:
    """Tests for crossing_angle."""

    def test_perpendicular(self) -> None:
        """Test the X configuration."""
        assert crossing_angle(seg(0, 0, 1, 1), seg(0, 1, 1, 0)) == pytest.approx(math.pi / 2)

    def test_forty_five(self) -> None:
        """Test directions (1, 0) and (2, 2)."""
        assert crossing_angle(seg(0, 0, 2, 0), seg(0, -1, 2, 1)) == pytest.approx(math.pi / 4)

    def test_acute_fold(self) -> None:
        """Test that obtuse direction pairs fold to the acute angle."""
        assert crossing_angle(seg(0, 0, 1, 0), seg(1, 0, 0, 1)) == pytest.approx(math.pi / 4)

    def test_matches_atan2_oracle(self) -> None:
        """Test agreement with an atan2 fold on random pairs."""
        rng = np.random.default_rng(14)
        for p in rng.uniform(-1.0, 1.0, size=(1000, 4, 2)):
            a = Segment.from_coords(p[0], p[1])
            b = Segment.from_coords(p[2], p[3])
            assert crossing_angle(a, b) == pytest.approx(atan2_angle(a, b), abs=1e-9)

    def test_degenerate(self) -> None:
        """Test that zero-length segments are rejected."""
        with pytest.raises(DegenerateSegment):
            crossing_angle(seg(1, 1, 1, 1), seg(0, 0, 1, 0))

    def test_cosines_many_nan_for_zero_direction(self) -> None:
        """Test the vectorized cosine on a zero direction."""
        cosines = crossing_cosines_many(
            np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[1.0, 1.0], [1.0, 0.0]])
        )

        assert cosines[0] == pytest.approx(math.sqrt(0.5))
        assert math.isnan(cosines[1])


class TestBoundingBox:
    """Tests for bounding_box."""

    def test_unit_square(self) -> None:
        """Test the corners of the unit square."""
        assert bounding_box([[0, 0], [1, 0], [1, 1], [0, 1]]) == BoundingBox(1.0, 1.0, 1.0)

    def test_coincident(self) -> None:
        """Test a drawing collapsed to one point."""
        assert bounding_box([[2, 3], [2, 3]]) == BoundingBox(0.0, 0.0, 0.0)

    def test_matches_scan(self) -> None:
        """Test against a min/max scan."""
        rng = np.random.default_rng(15)
        coords = rng.normal(size=(20, 2))
        xs = [float(x) for x, _ in coords]
        ys = [float(y) for _, y in coords]
        box = bounding_box(coords)

        assert box.width == max(xs) - min(xs)
        assert box.height == max(ys) - min(ys)
        assert box.area == box.width * box.height

    def test_empty(self) -> None:
        """Test that an empty layout has no bounding box."""
        with pytest.raises(ValueError):
            bounding_box(np.zeros((0, 2)))
