"""Planar primitives: proper segment crossing, crossing angle, bounding box.

Scalar functions work on `Segment` tuples; the `*_many` variants evaluate the
same predicates over arrays of segments for the optimizer's hot loop.
"""

import math
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from spxlayout.errors import DegenerateSegment

FloatArray = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]

# Absolute tolerance on orientation determinants; below it points count as collinear.
COLLINEAR_EPS = 1e-12


class Point(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    p: Point
    q: Point

    @classmethod
    def from_coords(cls, p: "npt.ArrayLike", q: "npt.ArrayLike") -> "Segment":
        px, py = (float(v) for v in np.asarray(p, dtype=np.float64))
        qx, qy = (float(v) for v in np.asarray(q, dtype=np.float64))
        return cls(Point(px, py), Point(qx, qy))

    @property
    def direction(self) -> tuple[float, float]:
        return (self.q.x - self.p.x, self.q.y - self.p.y)

    @property
    def length(self) -> float:
        dx, dy = self.direction
        return math.hypot(dx, dy)


class BoundingBox(NamedTuple):
    width: float
    height: float
    area: float


def _orientation(p: Point, q: Point, r: Point) -> int:
    value = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if abs(value) <= COLLINEAR_EPS:
        return 0
    return 1 if value > 0 else -1


def segments_cross(a: Segment, b: Segment) -> bool:
    """True iff the open segments properly intersect.

    Shared endpoints, T-junctions and collinear overlap are not crossings.
    """
    o1 = _orientation(a.p, a.q, b.p)
    o2 = _orientation(a.p, a.q, b.q)
    o3 = _orientation(b.p, b.q, a.p)
    o4 = _orientation(b.p, b.q, a.q)
    return o1 * o2 < 0 and o3 * o4 < 0


def crossing_angle(a: Segment, b: Segment) -> float:
    """Acute (or right) angle between the supporting lines, in radians.

    Raises:
        DegenerateSegment: If either segment has zero length.
    """
    ax, ay = a.direction
    bx, by = b.direction
    norm_a = math.hypot(ax, ay)
    norm_b = math.hypot(bx, by)
    if norm_a == 0.0 or norm_b == 0.0:
        raise DegenerateSegment("crossing angle of a zero-length segment")
    cosine = abs(ax * bx + ay * by) / (norm_a * norm_b)
    return math.acos(min(1.0, cosine))


def bounding_box(layout: "npt.ArrayLike") -> BoundingBox:
    """Axis-aligned extent of all vertex positions."""
    coords = np.asarray(layout, dtype=np.float64)
    if coords.size == 0:
        raise ValueError("bounding box of an empty layout")
    extent = coords.max(axis=0) - coords.min(axis=0)
    width, height = float(extent[0]), float(extent[1])
    return BoundingBox(width, height, width * height)


def _orientation_many(p: FloatArray, q: FloatArray, r: FloatArray) -> npt.NDArray[np.int8]:
    value = (q[:, 0] - p[:, 0]) * (r[:, 1] - p[:, 1]) - (q[:, 1] - p[:, 1]) * (r[:, 0] - p[:, 0])
    signs = np.sign(value).astype(np.int8)
    signs[np.abs(value) <= COLLINEAR_EPS] = 0
    return signs


def segments_cross_many(
    a_p: FloatArray,
    a_q: FloatArray,
    b_p: FloatArray,
    b_q: FloatArray,
) -> BoolArray:
    """Vectorized `segments_cross` over k segment pairs given as k x 2 endpoint arrays."""
    o1 = _orientation_many(a_p, a_q, b_p)
    o2 = _orientation_many(a_p, a_q, b_q)
    o3 = _orientation_many(b_p, b_q, a_p)
    o4 = _orientation_many(b_p, b_q, a_q)
    return (o1 * o2 < 0) & (o3 * o4 < 0)


def crossing_cosines_many(dir_a: FloatArray, dir_b: FloatArray) -> FloatArray:
    """|cos| of the angle between k direction pairs; NaN where a direction is zero."""
    dots = np.abs(np.einsum("ij,ij->i", dir_a, dir_b))
    norms = np.linalg.norm(dir_a, axis=1) * np.linalg.norm(dir_b, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        cosines = np.where(norms > 0.0, dots / norms, np.nan)
    return np.minimum(cosines, 1.0)
