"""Built-in graph families and the table-driven generator for user graphs.

Every built-in family knows its distance function in closed form, so balls are
generated sphere by sphere without any search.

Identifiers:
    ladder  vertices ``b:i`` (bottom, distance i) and ``t:i`` (top, distance i+1);
            edges ``bottom:i`` b:i->b:i+1, ``top:i`` t:i->t:i+1, ``rung:i`` b:i->t:i.
    line    vertices ``v:i`` for i in Z; edges ``e:i`` v:i->v:i+1.
    tree    root ``w``, child ``k`` of ``w:p1:...:pj`` is ``w:p1:...:pj:k``; the edge
            into a vertex ``w:<path>`` is ``f:<path>``.
"""

from __future__ import annotations

import itertools
from typing import Any, Callable, Mapping

from core import config
from core.errors import FamilyParameterError, GeneratorError, LoopSpecError
from core.graph_model import COLLAPSED_PREFIX, Edge, FamilyGenerator, RayBlock


def _parse(identifier: str, prefixes: tuple[str, ...]) -> tuple[str, int]:
    prefix, sep, rest = identifier.partition(":")
    if not sep or prefix not in prefixes:
        raise LoopSpecError(f"Unknown identifier '{identifier}'.")
    try:
        return prefix, int(rest)
    except ValueError:
        raise LoopSpecError(f"Unknown identifier '{identifier}'.") from None


class LadderGenerator(FamilyGenerator):
    """One-way infinite sideways ladder, based at the first bottom vertex."""

    basepoint = "b:0"

    def sphere(self, n: int) -> list[str]:
        if n == 0:
            return ["b:0"]
        return [f"b:{n}", f"t:{n - 1}"]

    def distance(self, vertex: str) -> int:
        side, i = _parse(vertex, ("b", "t"))
        if i < 0:
            raise LoopSpecError(f"Unknown vertex '{vertex}'.")
        return i if side == "b" else i + 1

    def edge(self, edge_id: str) -> Edge:
        kind, i = _parse(edge_id, ("bottom", "top", "rung"))
        if i < 0:
            raise LoopSpecError(f"Unknown edge '{edge_id}'.")
        if kind == "bottom":
            return Edge(edge_id, f"b:{i}", f"b:{i + 1}")
        if kind == "top":
            return Edge(edge_id, f"t:{i}", f"t:{i + 1}")
        return Edge(edge_id, f"b:{i}", f"t:{i}")

    def incident_edges(self, vertex: str) -> list[Edge]:
        side, i = _parse(vertex, ("b", "t"))
        run = "bottom" if side == "b" else "top"
        ids = [f"{run}:{i}", f"rung:{i}"]
        if i > 0:
            ids.append(f"{run}:{i - 1}")
        return [self.edge(edge_id) for edge_id in ids]

    def ray_names(self) -> tuple[str, ...]:
        return ("bottom", "top", "squares")

    def ray_block(self, ray: str, index: int) -> RayBlock:
        if index < 0:
            raise LoopSpecError(f"Ray index must be non-negative, got {index}.")
        if ray == "bottom":
            return RayBlock(f"b:{index}", ((f"bottom:{index}", +1),))
        if ray == "top":
            return RayBlock(f"t:{index}", ((f"top:{index}", +1),))
        if ray == "squares":
            # Square ``index`` clockwise from t:index, then along the top to t:index+1.
            return RayBlock(
                f"t:{index}",
                (
                    (f"top:{index}", +1),
                    (f"rung:{index + 1}", -1),
                    (f"bottom:{index}", -1),
                    (f"rung:{index}", +1),
                    (f"top:{index}", +1),
                ),
            )
        return super().ray_block(ray, index)


class LineGenerator(FamilyGenerator):
    """Cayley graph of Z with generator 1."""

    basepoint = "v:0"

    def sphere(self, n: int) -> list[str]:
        return ["v:0"] if n == 0 else [f"v:{-n}", f"v:{n}"]

    def distance(self, vertex: str) -> int:
        return abs(_parse(vertex, ("v",))[1])

    def edge(self, edge_id: str) -> Edge:
        _, i = _parse(edge_id, ("e",))
        return Edge(edge_id, f"v:{i}", f"v:{i + 1}")

    def incident_edges(self, vertex: str) -> list[Edge]:
        _, i = _parse(vertex, ("v",))
        return [self.edge(f"e:{i - 1}"), self.edge(f"e:{i}")]

    def ray_names(self) -> tuple[str, ...]:
        return ("right", "left")

    def ray_block(self, ray: str, index: int) -> RayBlock:
        if index < 0:
            raise LoopSpecError(f"Ray index must be non-negative, got {index}.")
        if ray == "right":
            return RayBlock(f"v:{index}", ((f"e:{index}", +1),))
        if ray == "left":
            return RayBlock(f"v:{-index}", ((f"e:{-index - 1}", -1),))
        return super().ray_block(ray, index)


class TreeGenerator(FamilyGenerator):
    """Regular tree of the given degree rooted at the basepoint."""

    basepoint = "w"

    def __init__(self, degree: int):
        self.degree = degree

    def _path(self, vertex: str) -> tuple[int, ...]:
        head, _, rest = vertex.partition(":")
        if head != "w":
            raise LoopSpecError(f"Unknown vertex '{vertex}'.")
        if not rest:
            return ()
        try:
            path = tuple(int(part) for part in rest.split(":"))
        except ValueError:
            raise LoopSpecError(f"Unknown vertex '{vertex}'.") from None
        if not self._valid(path):
            raise LoopSpecError(f"Unknown vertex '{vertex}'.")
        return path

    def _valid(self, path: tuple[int, ...]) -> bool:
        if not path:
            return True
        if not 0 <= path[0] < self.degree:
            return False
        return all(0 <= k < self.degree - 1 for k in path[1:])

    @staticmethod
    def _vertex(path: tuple[int, ...]) -> str:
        return ":".join(["w", *map(str, path)])

    @staticmethod
    def _edge_into(path: tuple[int, ...]) -> str:
        return ":".join(["f", *map(str, path)])

    def sphere(self, n: int) -> list[str]:
        if n == 0:
            return [self.basepoint]
        return [
            self._vertex((first, *tail))
            for first in range(self.degree)
            for tail in itertools.product(range(self.degree - 1), repeat=n - 1)
        ]

    def distance(self, vertex: str) -> int:
        return len(self._path(vertex))

    def edge(self, edge_id: str) -> Edge:
        head, _, rest = edge_id.partition(":")
        if head != "f" or not rest:
            raise LoopSpecError(f"Unknown edge '{edge_id}'.")
        child = self._path("w:" + rest)
        return Edge(edge_id, self._vertex(child[:-1]), self._vertex(child))

    def incident_edges(self, vertex: str) -> list[Edge]:
        path = self._path(vertex)
        fan = self.degree if not path else self.degree - 1
        edges = [self.edge(self._edge_into((*path, k))) for k in range(fan)]
        if path:
            edges.append(self.edge(self._edge_into(path)))
        return edges

    def ray_names(self) -> tuple[str, ...]:
        return ("leftmost", "rightmost")

    def ray_block(self, ray: str, index: int) -> RayBlock:
        if index < 0:
            raise LoopSpecError(f"Ray index must be non-negative, got {index}.")
        if ray == "leftmost":
            path = (0,) * (index + 1)
        elif ray == "rightmost":
            path = (self.degree - 1,) + (self.degree - 2,) * index
        else:
            return super().ray_block(ray, index)
        return RayBlock(self._vertex(path[:-1]), ((self._edge_into(path), +1),))


class TableGenerator(FamilyGenerator):
    """Finite-depth family given level by level (see ``utils/family_loader.py``)."""

    def __init__(
        self,
        basepoint: str,
        levels: list[list[str]],
        edges: list[Edge],
        rays: Mapping[str, list[tuple[tuple[str, int], ...]]] | None = None,
    ):
        self.basepoint = basepoint
        self._levels = [list(level) for level in levels]
        self._distance = {v: n for n, level in enumerate(levels) for v in level}
        self._edges = {edge.id: edge for edge in edges}
        self._incident: dict[str, list[Edge]] = {v: [] for v in self._distance}
        for edge in edges:
            for end in {edge.a, edge.b}:
                if end not in self._incident:
                    raise GeneratorError(f"Edge '{edge.id}' touches unlisted vertex '{end}'.")
                self._incident[end].append(edge)
        self._rays = dict(rays or {})

    def max_radius(self) -> int | None:
        return len(self._levels) - 1

    def sphere(self, n: int) -> list[str]:
        self.check_radius(n)
        return list(self._levels[n])

    def distance(self, vertex: str) -> int:
        try:
            return self._distance[vertex]
        except KeyError:
            raise LoopSpecError(f"Vertex '{vertex}' lies outside the generated region.") from None

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise LoopSpecError(f"Edge '{edge_id}' lies outside the generated region.") from None

    def incident_edges(self, vertex: str) -> list[Edge]:
        self.distance(vertex)
        return list(self._incident[vertex])

    def ray_names(self) -> tuple[str, ...]:
        return tuple(sorted(self._rays))

    def ray_block(self, ray: str, index: int) -> RayBlock:
        blocks = self._rays.get(ray)
        if blocks is None:
            return super().ray_block(ray, index)
        if not 0 <= index < len(blocks):
            raise LoopSpecError(f"Ray '{ray}' index {index} lies outside the generated region.")
        steps = blocks[index]
        if not steps:
            raise LoopSpecError(f"Ray '{ray}' block {index} is empty.")
        first_id, first_sign = steps[0]
        first = self.edge(first_id)
        return RayBlock(first.a if first_sign > 0 else first.b, tuple(steps))


def _make_ladder(params: Mapping[str, Any]) -> FamilyGenerator:
    if params:
        raise FamilyParameterError(f"The ladder family takes no parameters, got {sorted(params)}.")
    return LadderGenerator()


def _make_line(params: Mapping[str, Any]) -> FamilyGenerator:
    if params:
        raise FamilyParameterError(f"The line family takes no parameters, got {sorted(params)}.")
    return LineGenerator()


def _make_tree(params: Mapping[str, Any]) -> FamilyGenerator:
    unknown = set(params) - {"degree"}
    if unknown:
        raise FamilyParameterError(f"Unknown tree parameters: {sorted(unknown)}.")
    degree = params.get("degree", config.DEFAULT_TREE_DEGREE)
    try:
        degree = int(degree)
    except (TypeError, ValueError):
        raise FamilyParameterError(f"Tree degree must be an integer, got {degree!r}.") from None
    if degree < 3:
        raise FamilyParameterError(f"Tree degree must be at least 3, got {degree}.")
    return TreeGenerator(degree)


def _make_table(params: Mapping[str, Any]) -> FamilyGenerator:
    from utils.family_loader import load_table_family

    if "path" in params:
        data = load_table_family(params["path"])
    elif "table" in params:
        data = load_table_family(params["table"])
    else:
        raise FamilyParameterError("The table family needs a 'path' (JSON file) or 'table' (parsed JSON) parameter.")
    for level in data.vertices_at_level:
        for vertex in level:
            if vertex.split(":")[0] == COLLAPSED_PREFIX:
                raise FamilyParameterError(f"Vertex id '{vertex}' uses the reserved prefix '{COLLAPSED_PREFIX}:'.")
    return TableGenerator(data.basepoint, data.vertices_at_level, data.edges, data.rays)


FAMILY_REGISTRY: dict[str, Callable[[Mapping[str, Any]], FamilyGenerator]] = {
    "ladder": _make_ladder,
    "line": _make_line,
    "tree": _make_tree,
    "table": _make_table,
}
