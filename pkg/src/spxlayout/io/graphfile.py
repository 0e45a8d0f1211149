"""Plain-text graph format.

    # comment
    n 4
    0 1        undirected edge
    1 > 2      directed edge 1 -> 2

The header must be the first non-blank, non-comment line.
"""

import re
from pathlib import Path

from spxlayout.errors import InvalidGraph, ParseError
from spxlayout.graph.core import Edge, Graph

_TOKEN = re.compile(r"\S+")


def _tokens(line: str) -> list[tuple[int, str]]:
    """Tokens with their 1-based columns, comments removed."""
    content = line.split("#", 1)[0]
    return [(m.start() + 1, m.group()) for m in _TOKEN.finditer(content)]


def _parse_int(token: str, line: int, column: int, what: str) -> int:
    if not re.fullmatch(r"[0-9]+", token):
        raise ParseError(line, column, f"expected {what}, got {token!r}")
    return int(token)


def parse_graph(text: str) -> Graph:
    """Parse graph text into a Graph.

    Raises:
        ParseError: With the line and column of the first problem.
    """
    n: int | None = None
    edges: list[Edge] = []
    seen: dict[frozenset[int], int] = {}
    last_line = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        tokens = _tokens(raw)
        if not tokens:
            continue

        if n is None:
            col, word = tokens[0]
            if word != "n":
                raise ParseError(line_no, col, f"expected header 'n <count>', got {word!r}")
            if len(tokens) != 2:
                column = tokens[2][0] if len(tokens) > 2 else len(raw) + 1
                raise ParseError(line_no, column, "header must be exactly 'n <count>'")
            n = _parse_int(tokens[1][1], line_no, tokens[1][0], "vertex count")
            if n < 1:
                raise ParseError(line_no, tokens[1][0], "vertex count must be at least 1")
            continue

        directed = len(tokens) == 3 and tokens[1][1] == ">"
        if len(tokens) not in (2, 3) or (len(tokens) == 3 and not directed):
            if len(tokens) > 3:
                column = tokens[3][0]
            elif len(tokens) == 3:
                column = tokens[1][0]
            else:
                column = len(raw) + 1
            raise ParseError(line_no, column, "expected edge 'u v' or 'u > v'")

        (col_u, tok_u), (col_v, tok_v) = tokens[0], tokens[-1]
        u = _parse_int(tok_u, line_no, col_u, "vertex index")
        v = _parse_int(tok_v, line_no, col_v, "vertex index")
        for vertex, col in ((u, col_u), (v, col_v)):
            if vertex >= n:
                raise ParseError(line_no, col, f"vertex {vertex} out of range for n={n}")
        if u == v:
            raise ParseError(line_no, col_u, f"self-loop on vertex {u}")
        key = frozenset((u, v))
        if key in seen:
            raise ParseError(line_no, col_u, f"duplicate edge {u}-{v} (first on line {seen[key]})")
        seen[key] = line_no
        edges.append(Edge(u, v, directed))

    if n is None:
        raise ParseError(max(last_line, 1), 1, "missing header 'n <count>'")
    try:
        return Graph(n=n, edges=tuple(edges))
    except InvalidGraph as e:
        raise ParseError(max(last_line, 1), 1, str(e)) from e


def write_graph(g: Graph) -> str:
    """Normalized text: header, then one edge per line in edge order."""
    lines = [f"n {g.n}"]
    for edge in g.edges:
        arrow = " > " if edge.directed else " "
        lines.append(f"{edge.source}{arrow}{edge.target}")
    return "\n".join(lines) + "\n"


def read_graph(path: Path) -> Graph:
    return parse_graph(path.read_text(encoding="utf-8"))


def save_graph(path: Path, g: Graph) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(write_graph(g), encoding="utf-8")
