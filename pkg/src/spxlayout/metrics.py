"""Readability metrics of a straight-line drawing.

Angles are reported in degrees. A drawing without crossings has minimum and
average crossing angle 90.
"""

import math

import numpy as np
from pydantic import BaseModel

from spxlayout.geometry import (
    BoundingBox,
    bounding_box,
    crossing_cosines_many,
    segments_cross_many,
)
from spxlayout.graph.core import DistanceMatrix, Graph, independent_edge_pairs
from spxlayout.stress import Layout, stress_value

CROSSING_FREE_ANGLE = 90.0


def _crossing_mask(
    layout: Layout, g: Graph
) -> tuple[list[tuple[int, int]], np.ndarray, np.ndarray, np.ndarray]:
    pairs = independent_edge_pairs(g)
    if not pairs:
        empty = np.zeros((0, 2))
        return pairs, np.zeros(0, dtype=bool), empty, empty
    index = np.asarray(pairs, dtype=np.intp)
    a = layout[g.endpoints[index[:, 0]]]
    b = layout[g.endpoints[index[:, 1]]]
    crossing = segments_cross_many(a[:, 0], a[:, 1], b[:, 0], b[:, 1])
    return pairs, crossing, a[:, 1] - a[:, 0], b[:, 1] - b[:, 0]


def count_crossings(layout: Layout, g: Graph) -> int:
    """Number of independent edge pairs whose segments properly cross."""
    _, crossing, _, _ = _crossing_mask(layout, g)
    return int(crossing.sum())


def crossing_angles(layout: Layout, g: Graph) -> list[float]:
    """Crossing angle in degrees of every crossing pair, in pair order."""
    _, crossing, dir_a, dir_b = _crossing_mask(layout, g)
    if not crossing.any():
        return []
    cosines = crossing_cosines_many(dir_a[crossing], dir_b[crossing])
    return [math.degrees(math.acos(float(c))) for c in cosines]


def min_crossing_angle(layout: Layout, g: Graph) -> float:
    angles = crossing_angles(layout, g)
    return min(angles) if angles else CROSSING_FREE_ANGLE


def avg_crossing_angle(layout: Layout, g: Graph) -> float:
    angles = crossing_angles(layout, g)
    return math.fsum(angles) / len(angles) if angles else CROSSING_FREE_ANGLE


def neighborhood_preservation(layout: Layout, g: Graph) -> float:
    """Mean Jaccard similarity of graph neighbors and nearest layout neighbors.

    Each vertex of degree k is compared with its k nearest other vertices;
    distance ties go to the lower vertex index.

    Raises:
        ValueError: For graphs with fewer than two vertices.
    """
    if g.n < 2:
        raise ValueError("neighborhood preservation needs at least two vertices")

    delta = layout[:, np.newaxis, :] - layout[np.newaxis, :, :]
    dist = np.linalg.norm(delta, axis=-1)
    np.fill_diagonal(dist, np.inf)

    scores: list[float] = []
    for v in range(g.n):
        neighbors = g.neighbors(v)
        k = len(neighbors)
        if k == 0:
            scores.append(1.0)
            continue
        nearest = {int(i) for i in np.argsort(dist[v], kind="stable")[:k]}
        scores.append(len(neighbors & nearest) / len(neighbors | nearest))
    return math.fsum(scores) / g.n


def drawing_metrics(layout: Layout) -> BoundingBox:
    return bounding_box(layout)


def upward_fraction(layout: Layout, g: Graph) -> float:
    """Share of directed edges drawn strictly upward; 1.0 without directed edges."""
    directed = g.directed_edges
    if not directed:
        return 1.0
    upward = sum(1 for e in directed if layout[e.target, 1] > layout[e.source, 1])
    return upward / len(directed)


class MetricsReport(BaseModel):
    """All metrics of one drawing, serialized as a flat JSON object."""

    stress: float
    crossings: int
    min_crossing_angle_deg: float
    avg_crossing_angle_deg: float
    neighborhood_preservation: float
    drawing_width: float
    drawing_height: float
    drawing_area: float
    upward_fraction: float


def report(layout: Layout, g: Graph, dm: DistanceMatrix) -> MetricsReport:
    box = drawing_metrics(layout)
    angles = crossing_angles(layout, g)
    return MetricsReport(
        stress=stress_value(layout, dm),
        crossings=len(angles),
        min_crossing_angle_deg=min(angles) if angles else CROSSING_FREE_ANGLE,
        avg_crossing_angle_deg=math.fsum(angles) / len(angles) if angles else CROSSING_FREE_ANGLE,
        neighborhood_preservation=neighborhood_preservation(layout, g) if g.n >= 2 else 1.0,
        drawing_width=box.width,
        drawing_height=box.height,
        drawing_area=box.area,
        upward_fraction=upward_fraction(layout, g),
    )
