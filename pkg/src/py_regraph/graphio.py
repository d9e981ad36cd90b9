"""Plain-text graph format ``regraph v1``.

The first line is ``n d``; then one ``u v`` line per undirected edge with
``u < v``, 0-based, sorted lexicographically, every line newline-terminated.
A file is accepted only if it is byte-identical to the canonical rendering of
the graph it describes.
"""

from __future__ import annotations

from pathlib import Path

from .graph import GraphError, RegularGraph
from .records import PathLike, atomic_write_text


class GraphFormatError(GraphError):
    """Raised when text is not a canonical ``regraph v1`` document."""


def dumps(g: RegularGraph) -> str:
    """Render ``g`` in canonical ``regraph v1`` form."""
    lines = [f"{g.n} {g.d}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def _parse_int_pair(line: str, lineno: int) -> tuple:
    parts = line.split(" ")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise GraphFormatError(
            f"Line {lineno}: expected two non-negative integers, got {line!r}."
        )
    return int(parts[0]), int(parts[1])


def loads(text: str) -> RegularGraph:
    """Parse a canonical ``regraph v1`` document.

    Raises:
        GraphFormatError: On malformed lines, an invalid graph, or any
            deviation from the canonical byte layout (ordering, spacing,
            leading zeros, missing final newline).
    """
    if not text.endswith("\n"):
        raise GraphFormatError("Document must end with a newline.")
    lines = text[:-1].split("\n")
    n, d = _parse_int_pair(lines[0], 1)
    edges = [_parse_int_pair(line, k) for k, line in enumerate(lines[1:], start=2)]
    try:
        g = RegularGraph.from_edges(n, d, edges)
    except GraphError as exc:
        raise GraphFormatError(
            f"Document does not describe a simple {d}-regular graph: {exc}"
        ) from exc
    if dumps(g) != text:
        raise GraphFormatError(
            "Document is not in canonical form (sorted, u < v, no padding)."
        )
    return g


def read_graph(path: PathLike) -> RegularGraph:
    """Read a graph file."""
    return loads(Path(path).read_text(encoding="utf-8"))


def write_graph(g: RegularGraph, path: PathLike) -> Path:
    """Atomically write ``g`` to ``path``."""
    return atomic_write_text(path, dumps(g))


__all__ = ["GraphFormatError", "dumps", "loads", "read_graph", "write_graph"]
