"""Export finite graphs and quotient graphs to Graphviz DOT."""

from __future__ import annotations

from pathlib import Path
from typing import Callable

from core.graph_model import FiniteGraph, is_collapsed_id
from core.truncation import QuotientGraph


def _quote(identifier: str) -> str:
    return '"' + identifier.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: FiniteGraph | QuotientGraph, name: str = "G") -> str:
    """DOT source for ``graph``. Collapsed vertices are drawn as filled boxes, the basepoint doubled."""
    finite = graph.graph if isinstance(graph, QuotientGraph) else graph
    lines = [f"digraph {_quote(name)} {{", "  node [shape=circle];"]
    for vertex in finite.vertices:
        attrs = []
        if is_collapsed_id(vertex):
            attrs += ["shape=box", "style=filled", 'fillcolor="lightgray"']
        if vertex == finite.basepoint:
            attrs.append("peripheries=2")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_quote(vertex)}{suffix};")
    for edge in finite.edges:
        lines.append(f"  {_quote(edge.a)} -> {_quote(edge.b)} [label={_quote(edge.id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(
    graph: FiniteGraph | QuotientGraph,
    file_path: str | Path,
    name: str = "G",
    logger_func: Callable[[str], None] = print,
) -> bool:
    try:
        Path(file_path).write_text(to_dot(graph, name), encoding="utf-8")
        return True
    except OSError as exc:
        logger_func(f"Error writing DOT file: {exc}")
        return False
