"""Import table-driven graph families from JSON.

File layout::

    {
      "name": "my-graph",
      "basepoint": "a",
      "levels": [
        {"vertices_at_level": ["a"], "edges": []},
        {"vertices_at_level": ["b", "c"], "edges": [["ab", "a", "b"], ["ac", "a", "c"]]},
        {"vertices_at_level": ["d"], "edges": [["bc", "b", "c"], ["bd", "b", "d"], ["cd", "c", "d"]]}
      ],
      "rays": {"down": [[["ab", 1]], [["bd", 1]]]}
    }

Level ``k`` lists the vertices at distance ``k`` and the edges whose farther
endpoint sits at level ``k``. ``rays`` is optional; each ray is a list of blocks
and each block a list of ``[edge_id, sign]`` steps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from core.errors import FamilyParameterError
from core.graph_model import Edge


@dataclass
class TableFamilyData:
    name: str
    basepoint: str
    vertices_at_level: list[list[str]]
    edges: list[Edge]
    rays: dict[str, list[tuple[tuple[str, int], ...]]] = field(default_factory=dict)


def _parse_edge(raw: Any, level_idx: int) -> Edge:
    if not isinstance(raw, list) or len(raw) != 3 or not all(isinstance(part, str) for part in raw):
        raise FamilyParameterError(
            f"Level {level_idx}: edge entries must be [edge_id, endpoint_a, endpoint_b] strings, got {raw!r}."
        )
    return Edge(raw[0], raw[1], raw[2])


def _parse_rays(raw: Any) -> dict[str, list[tuple[tuple[str, int], ...]]]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise FamilyParameterError("'rays' must be an object mapping ray names to block lists.")
    rays: dict[str, list[tuple[tuple[str, int], ...]]] = {}
    for name, blocks in raw.items():
        if not isinstance(blocks, list):
            raise FamilyParameterError(f"Ray '{name}' must be a list of blocks.")
        parsed = []
        for idx, block in enumerate(blocks):
            steps = []
            for step in block:
                if (
                    not isinstance(step, list)
                    or len(step) != 2
                    or not isinstance(step[0], str)
                    or step[1] not in (1, -1)
                ):
                    raise FamilyParameterError(f"Ray '{name}' block {idx}: steps must be [edge_id, 1 or -1], got {step!r}.")
                steps.append((step[0], int(step[1])))
            parsed.append(tuple(steps))
        rays[name] = parsed
    return rays


def parse_table_family(payload: Any) -> TableFamilyData:
    """Validate the shape of a parsed table-family document."""
    if not isinstance(payload, dict):
        raise FamilyParameterError("Table family: top-level JSON object expected.")
    basepoint = payload.get("basepoint")
    if not isinstance(basepoint, str):
        raise FamilyParameterError("Table family: 'basepoint' must be a vertex id string.")
    levels = payload.get("levels")
    if not isinstance(levels, list) or not levels:
        raise FamilyParameterError("Table family: 'levels' must be a non-empty list.")

    vertices_at_level: list[list[str]] = []
    edges: list[Edge] = []
    placed: dict[str, int] = {}
    for level_idx, level in enumerate(levels):
        if not isinstance(level, dict):
            raise FamilyParameterError(f"Level {level_idx}: object with 'vertices_at_level' and 'edges' expected.")
        vertices = level.get("vertices_at_level", [])
        if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
            raise FamilyParameterError(f"Level {level_idx}: 'vertices_at_level' must be a list of strings.")
        for vertex in vertices:
            if vertex in placed:
                raise FamilyParameterError(f"Vertex '{vertex}' appears at levels {placed[vertex]} and {level_idx}.")
            placed[vertex] = level_idx
        vertices_at_level.append(list(vertices))
        for raw_edge in level.get("edges", []):
            edge = _parse_edge(raw_edge, level_idx)
            for end in (edge.a, edge.b):
                if placed.get(end, level_idx + 1) > level_idx:
                    raise FamilyParameterError(
                        f"Level {level_idx}: edge '{edge.id}' reaches '{end}', which is not listed at or before this level."
                    )
            edges.append(edge)

    if vertices_at_level[0] != [basepoint]:
        raise FamilyParameterError("Table family: level 0 must list exactly the basepoint.")

    return TableFamilyData(
        name=str(payload.get("name", "table")),
        basepoint=basepoint,
        vertices_at_level=vertices_at_level,
        edges=edges,
        rays=_parse_rays(payload.get("rays")),
    )


def load_table_family(source: str | Path | dict) -> TableFamilyData:
    """Parse a table family from a JSON file path or an already-decoded document."""
    if isinstance(source, dict):
        return parse_table_family(source)
    path = Path(source)
    if not path.is_file():
        raise FamilyParameterError(f"Table family file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FamilyParameterError(f"Malformed JSON in '{path}': {exc}") from exc
    return parse_table_family(payload)
