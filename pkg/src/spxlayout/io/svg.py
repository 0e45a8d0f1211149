"""SVG rendering of a straight-line drawing."""

from dataclasses import dataclass

import numpy as np

from spxlayout.geometry import segments_cross_many
from spxlayout.graph.core import Graph, independent_edge_pairs
from spxlayout.stress import Layout


@dataclass(frozen=True)
class SvgOptions:
    """Rendering options; lengths other than `scale` are in pixels."""

    scale: float = 50.0  # pixels per layout unit
    padding: float = 20.0
    vertex_radius: float = 4.0
    stroke_width: float = 1.5
    arrowheads: bool = True
    highlight_crossings: bool = False
    edge_color: str = "#555555"
    crossing_color: str = "#d62728"
    vertex_color: str = "#1f77b4"


def _crossing_edges(layout: Layout, g: Graph) -> set[int]:
    pairs = independent_edge_pairs(g)
    if not pairs:
        return set()
    index = np.asarray(pairs, dtype=np.intp)
    a = layout[g.endpoints[index[:, 0]]]
    b = layout[g.endpoints[index[:, 1]]]
    crossing = segments_cross_many(a[:, 0], a[:, 1], b[:, 0], b[:, 1])
    return {int(i) for i in index[crossing].ravel()}


def render_svg(layout: Layout, g: Graph, options: SvgOptions | None = None) -> str:
    """SVG document with one line per edge and one circle per vertex.

    The y axis points up, so upward drawings render upward. Output is a pure
    function of the inputs.
    """
    opts = options or SvgOptions()
    coords = np.asarray(layout, dtype=np.float64)
    # Flip y into screen coordinates.
    points = np.column_stack([coords[:, 0], -coords[:, 1]]) * opts.scale
    low = points.min(axis=0) - opts.padding
    size = points.max(axis=0) - points.min(axis=0) + 2.0 * opts.padding
    width, height = float(size[0]), float(size[1])

    def fmt(value: float) -> str:
        return f"{value:.3f}"

    lines = [
        "<svg xmlns='http://www.w3.org/2000/svg' "
        f"width='{fmt(width)}' height='{fmt(height)}' "
        f"viewBox='{fmt(low[0])} {fmt(low[1])} {fmt(width)} {fmt(height)}'>"
    ]
    directed = opts.arrowheads and g.has_directed_edges
    if directed:
        lines.append("<defs>")
        lines.append(
            "<marker id='arrow' viewBox='0 0 10 10' refX='10' refY='5' "
            "markerWidth='6' markerHeight='6' orient='auto-start-reverse'>"
        )
        lines.append("<path d='M 0 0 L 10 5 L 0 10 z' fill='context-stroke'/>")
        lines.append("</marker>")
        lines.append("</defs>")

    crossing = _crossing_edges(coords, g) if opts.highlight_crossings else set()
    for index, edge in enumerate(g.edges):
        (x1, y1), (x2, y2) = points[edge.source], points[edge.target]
        if directed and edge.directed:
            # Stop short of the target circle so the arrowhead stays visible.
            direction = np.array([x2 - x1, y2 - y1])
            length = float(np.linalg.norm(direction))
            if length > opts.vertex_radius:
                x2, y2 = np.array([x2, y2]) - direction / length * opts.vertex_radius
        color = opts.crossing_color if index in crossing else opts.edge_color
        marker = " marker-end='url(#arrow)'" if directed and edge.directed else ""
        lines.append(
            f"<line x1='{fmt(x1)}' y1='{fmt(y1)}' x2='{fmt(x2)}' y2='{fmt(y2)}' "
            f"stroke='{color}' stroke-width='{fmt(opts.stroke_width)}'{marker}/>"
        )

    for v, (x, y) in enumerate(points):
        lines.append(
            f"<circle cx='{fmt(x)}' cy='{fmt(y)}' r='{fmt(opts.vertex_radius)}' "
            f"fill='{opts.vertex_color}'><title>{v}</title></circle>"
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
