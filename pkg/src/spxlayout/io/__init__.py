"""Graph and layout files, SVG output."""

from spxlayout.io.graphfile import parse_graph, read_graph, save_graph, write_graph
from spxlayout.io.layoutfile import (
    LayoutFile,
    dump_layout,
    parse_layout,
    read_layout,
    write_layout,
)
from spxlayout.io.svg import SvgOptions, render_svg

__all__ = [
    "LayoutFile",
    "SvgOptions",
    "dump_layout",
    "parse_graph",
    "parse_layout",
    "read_graph",
    "read_layout",
    "render_svg",
    "save_graph",
    "write_graph",
    "write_layout",
]
