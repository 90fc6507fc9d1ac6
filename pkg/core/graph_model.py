"""Locally finite graphs described by generators, and their finite balls.

An infinite graph is never materialized: a :class:`GraphFamily` wraps a
:class:`FamilyGenerator` that can list the sphere of vertices at each distance
from the basepoint together with the (finitely many) edges at every vertex.
Balls, complement partitions and the other finite shadows are computed from it
on demand and cached, since families are immutable.
"""

from __future__ import annotations

import logging
import re
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Iterable, Mapping

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from core import config
from core.errors import (
    FamilyParameterError,
    GeneratorError,
    HorizonError,
    LoopSpecError,
    PathError,
    UnknownFamilyError,
)

logger = logging.getLogger(__name__)

_INT_PART = re.compile(r"-?\d+")
COLLAPSED_PREFIX = "C"


def id_key(identifier: str) -> tuple:
    """Total order on vertex and edge identifiers.

    Identifiers are split on ``":"``; integer parts compare numerically and come
    before string parts, string parts compare lexicographically. Collapsed
    vertices (``"C:n:i"``) sort after every ordinary vertex.
    """
    parts = identifier.split(":")
    encoded = tuple(
        (0, int(part), "") if _INT_PART.fullmatch(part) else (1, 0, part)
        for part in parts
    )
    return (1 if is_collapsed_id(identifier) else 0, encoded)


def is_collapsed_id(identifier: str) -> bool:
    parts = identifier.split(":")
    return len(parts) == 3 and parts[0] == COLLAPSED_PREFIX


def collapsed_id(level: int, index: int) -> str:
    return f"{COLLAPSED_PREFIX}:{level}:{index}"


@dataclass(frozen=True)
class Edge:
    """An edge record; ``a`` -> ``b`` is its stored orientation."""

    id: str
    a: str
    b: str

    def other(self, vertex: str) -> str:
        return self.b if vertex == self.a else self.a

    @property
    def is_loop(self) -> bool:
        return self.a == self.b


@dataclass(frozen=True)
class Incidence:
    neighbor: str
    edge_id: str
    sign: int  # +1 when leaving along a -> b


@dataclass(frozen=True)
class FiniteGraph:
    """Finite multigraph with a basepoint. Vertices and edges are kept sorted by :func:`id_key`."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    basepoint: str

    def __post_init__(self) -> None:
        vertex_set = set(self.vertices)
        if len(vertex_set) != len(self.vertices):
            raise GeneratorError("Duplicate vertex identifiers in graph.")
        if self.basepoint not in vertex_set:
            raise GeneratorError(f"Basepoint '{self.basepoint}' is not a vertex of the graph.")
        seen: set[str] = set()
        for edge in self.edges:
            if edge.id in seen:
                raise GeneratorError(f"Duplicate edge identifier '{edge.id}'.")
            seen.add(edge.id)
            if edge.a not in vertex_set or edge.b not in vertex_set:
                raise GeneratorError(f"Edge '{edge.id}' has an endpoint outside the vertex set.")

    @classmethod
    def from_parts(cls, vertices: Iterable[str], edges: Iterable[Edge], basepoint: str) -> "FiniteGraph":
        return cls(
            vertices=tuple(sorted(set(vertices), key=id_key)),
            edges=tuple(sorted(edges, key=lambda e: id_key(e.id))),
            basepoint=basepoint,
        )

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {edge.id: edge for edge in self.edges}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def incidence(self) -> dict[str, tuple[Incidence, ...]]:
        """Incident edges per vertex, ordered by neighbor id then edge id."""
        table: dict[str, list[Incidence]] = {v: [] for v in self.vertices}
        for edge in self.edges:
            table[edge.a].append(Incidence(edge.b, edge.id, +1))
            if not edge.is_loop:
                table[edge.b].append(Incidence(edge.a, edge.id, -1))
        return {
            v: tuple(sorted(items, key=lambda inc: (id_key(inc.neighbor), id_key(inc.edge_id))))
            for v, items in table.items()
        }

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self.edge_map

    def edge(self, edge_id: str) -> Edge:
        return self.edge_map[edge_id]

    def degree(self, vertex: str) -> int:
        return sum(2 if self.edge_map[inc.edge_id].is_loop else 1 for inc in self.incidence[vertex])

    def component_labels(self) -> tuple[int, np.ndarray]:
        return _component_labels(self.vertices, self.edges, self.vertex_index)

    def is_connected(self) -> bool:
        count, _ = self.component_labels()
        return count == 1

    def betti_number(self) -> int:
        """First Betti number E - V + (number of components)."""
        count, _ = self.component_labels()
        return len(self.edges) - len(self.vertices) + count

    def contains(self, other: "FiniteGraph") -> bool:
        """True when ``other`` is a subgraph of this graph (same ids, same endpoints)."""
        if not set(other.vertices) <= set(self.vertices):
            return False
        return all(edge.id in self.edge_map and self.edge_map[edge.id] == edge for edge in other.edges)


def _component_labels(
    vertices: tuple[str, ...],
    edges: Iterable[Edge],
    index: Mapping[str, int],
) -> tuple[int, np.ndarray]:
    rows: list[int] = []
    cols: list[int] = []
    for edge in edges:
        rows.append(index[edge.a])
        cols.append(index[edge.b])
    size = len(vertices)
    adjacency = coo_matrix(
        (np.ones(len(rows), dtype=np.int8), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(size, size),
    )
    count, labels = connected_components(adjacency, directed=False)
    return int(count), labels


@dataclass(frozen=True)
class RayBlock:
    """One index of a parametric ray: the oriented edges walked from ``start``."""

    start: str
    steps: tuple[tuple[str, int], ...]


class FamilyGenerator(ABC):
    """Rule producing an infinite locally finite graph sphere by sphere."""

    basepoint: str

    @abstractmethod
    def sphere(self, n: int) -> list[str]:
        """Vertices at distance exactly ``n`` from the basepoint."""

    @abstractmethod
    def incident_edges(self, vertex: str) -> list[Edge]:
        """Every edge at ``vertex``; the list must not depend on the radius."""

    @abstractmethod
    def distance(self, vertex: str) -> int:
        ...

    @abstractmethod
    def edge(self, edge_id: str) -> Edge:
        """Look up an edge by id; raises :class:`LoopSpecError` for unknown ids."""

    def max_radius(self) -> int | None:
        return None

    def ray_names(self) -> tuple[str, ...]:
        return ()

    def ray_block(self, ray: str, index: int) -> RayBlock:
        raise LoopSpecError(f"Unknown ray '{ray}' for this family.")

    def check_radius(self, n: int) -> None:
        limit = self.max_radius()
        if limit is not None and n > limit:
            raise GeneratorError(f"Radius {n} lies beyond the generated region (depth {limit}).")


@dataclass(frozen=True, eq=False)
class GraphFamily:
    """Named, parametrized generator of an infinite graph pointed at ``basepoint``."""

    name: str
    params: Mapping[str, Any] = field(repr=False)
    generator: FamilyGenerator = field(repr=False)

    @property
    def basepoint(self) -> str:
        return self.generator.basepoint

    def distance(self, vertex: str) -> int:
        return self.generator.distance(vertex)

    def edge(self, edge_id: str) -> Edge:
        return self.generator.edge(edge_id)

    def ray_block(self, ray: str, index: int) -> RayBlock:
        return self.generator.ray_block(ray, index)


@dataclass(frozen=True)
class ComplementComponent:
    id: str
    frontier: tuple[str, ...]
    infinite: bool

    @property
    def finiteness(self) -> str:
        return "infinite" if self.infinite else "finite"


@dataclass(frozen=True)
class ComplementPartition:
    """Components of the subgraph induced on vertices at distance >= ``level``, seen inside a ball."""

    level: int
    radius: int
    members: tuple[tuple[str, ...], ...]
    frontiers: tuple[tuple[str, ...], ...]
    component_of: Mapping[str, int]


def build_family(name: str, params: Mapping[str, Any] | None = None) -> GraphFamily:
    """Instantiate a registered family and validate its generator."""
    from core.families import FAMILY_REGISTRY

    params = dict(params or {})
    factory = FAMILY_REGISTRY.get(name)
    if factory is None:
        known = ", ".join(sorted(FAMILY_REGISTRY))
        raise UnknownFamilyError(f"Unknown graph family '{name}'. Known families: {known}.")
    try:
        generator = factory(params)
    except (TypeError, KeyError) as exc:
        raise FamilyParameterError(f"Invalid parameters for family '{name}': {exc}") from exc
    family = GraphFamily(name=name, params=params, generator=generator)
    validate_family(family, config.VALIDATION_RADIUS)
    return family


def validate_family(family: GraphFamily, radius: int, max_vertices: int | None = None) -> int:
    """Check local finiteness, monotonicity and distance correctness up to ``radius``.

    Stops early when the next sphere would push the number of checked vertices
    past ``max_vertices`` (default ``VALIDATION_MAX_VERTICES``). Returns the radius
    actually checked.
    """
    generator = family.generator
    budget = config.VALIDATION_MAX_VERTICES if max_vertices is None else max_vertices
    limit = generator.max_radius()
    if limit is not None:
        radius = min(radius, limit)

    seen: set[str] = set()
    checked = 0
    sphere = generator.sphere(0)
    for n in range(radius + 1):
        outward = 0
        for vertex in sphere:
            if vertex in seen:
                raise GeneratorError(f"Vertex '{vertex}' listed at more than one radius.")
            if generator.distance(vertex) != n:
                raise GeneratorError(f"Vertex '{vertex}' listed at radius {n} but reports distance {generator.distance(vertex)}.")
            first = generator.incident_edges(vertex)
            second = generator.incident_edges(vertex)
            if len(first) != len(second):
                raise GeneratorError(f"Degree of '{vertex}' is not stable.")
            for edge in first:
                if vertex not in (edge.a, edge.b):
                    raise GeneratorError(f"Edge '{edge.id}' listed at '{vertex}' does not touch it.")
                gap = abs(generator.distance(edge.a) - generator.distance(edge.b))
                if gap > 1:
                    raise GeneratorError(f"Edge '{edge.id}' joins vertices whose distances differ by {gap}.")
                if generator.distance(edge.other(vertex)) == n + 1:
                    outward += 1
        seen.update(sphere)
        checked = n
        # outward edges bound the size of the next sphere from above
        if n == radius or len(seen) + outward > budget:
            break
        sphere = generator.sphere(n + 1)

    graph = ball(family, checked)
    depth = bfs_depths(graph)
    for vertex in graph.vertices:
        if depth.get(vertex) != family.distance(vertex):
            raise GeneratorError(f"Vertex '{vertex}' is not at its declared distance from the basepoint.")
    logger.debug("Validated family '%s' up to radius %d (%d vertices).", family.name, checked, len(graph.vertices))
    return checked


def bfs_depths(graph: FiniteGraph) -> dict[str, int]:
    """Breadth-first depth of every vertex reachable from the basepoint."""
    depth = {graph.basepoint: 0}
    queue = deque([graph.basepoint])
    while queue:
        vertex = queue.popleft()
        for inc in graph.incidence[vertex]:
            if inc.neighbor not in depth:
                depth[inc.neighbor] = depth[vertex] + 1
                queue.append(inc.neighbor)
    return depth


@lru_cache(maxsize=512)
def ball(family: GraphFamily, n: int) -> FiniteGraph:
    """Subgraph induced on the vertices at distance <= ``n`` from the basepoint."""
    if n < 0:
        raise HorizonError(f"Ball radius must be non-negative, got {n}.")
    generator = family.generator
    generator.check_radius(n)
    vertices: list[str] = []
    for radius in range(n + 1):
        vertices.extend(generator.sphere(radius))
    members = set(vertices)
    edges: dict[str, Edge] = {}
    for vertex in vertices:
        for edge in generator.incident_edges(vertex):
            if edge.a in members and edge.b in members:
                edges[edge.id] = edge
    return FiniteGraph.from_parts(vertices, edges.values(), generator.basepoint)


@lru_cache(maxsize=512)
def complement_partition(family: GraphFamily, level: int, radius: int) -> ComplementPartition:
    """Partition the vertices at distance in ``[level, radius]`` into components of Γ ∖ B°(p, level).

    Components are ordered by their least frontier vertex (distance exactly ``level``).
    """
    if radius < level:
        raise HorizonError(f"Partition radius {radius} is below level {level}.")
    graph = ball(family, radius)
    outer = tuple(v for v in graph.vertices if family.distance(v) >= level)
    index = {v: i for i, v in enumerate(outer)}
    inner_edges = [e for e in graph.edges if e.a in index and e.b in index]
    _, labels = _component_labels(outer, inner_edges, index)

    groups: dict[int, list[str]] = {}
    for vertex, label in zip(outer, labels):
        groups.setdefault(int(label), []).append(vertex)

    ordered: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    for vertices in groups.values():
        frontier = tuple(v for v in vertices if family.distance(v) == level)
        if not frontier:
            raise GeneratorError(f"A component beyond radius {level} has no frontier vertex.")
        ordered.append((frontier, tuple(vertices)))
    ordered.sort(key=lambda item: id_key(item[0][0]))

    component_of = {v: i for i, (_, vertices) in enumerate(ordered) for v in vertices}
    return ComplementPartition(
        level=level,
        radius=radius,
        members=tuple(vertices for _, vertices in ordered),
        frontiers=tuple(frontier for frontier, _ in ordered),
        component_of=component_of,
    )


def complement_components(family: GraphFamily, n: int, horizon: int) -> list[ComplementComponent]:
    """Components of Γ ∖ B°(p, n) with an advisory finiteness flag decided within ``horizon``.

    A component is flagged infinite when it still gains vertices between radius
    ``horizon - 1`` and ``horizon``. For table families the horizon is clipped
    to the depth of the table.
    """
    if n < 0:
        raise HorizonError(f"Level must be non-negative, got {n}.")
    if horizon <= n:
        raise HorizonError(f"Horizon {horizon} must exceed level {n}.")
    limit = family.generator.max_radius()
    if limit is not None and horizon > limit:
        if limit <= n:
            raise HorizonError(f"Level {n} leaves nothing of table depth {limit} to inspect.")
        horizon = limit
    outer = complement_partition(family, n, horizon)
    inner = complement_partition(family, n, horizon - 1)

    components = []
    for i, (frontier, members) in enumerate(zip(outer.frontiers, outer.members)):
        earlier = {inner.component_of[v] for v in frontier}
        earlier_size = sum(len(inner.members[j]) for j in earlier)
        components.append(
            ComplementComponent(
                id=collapsed_id(n, i),
                frontier=frontier,
                infinite=len(members) > earlier_size,
            )
        )
    return components


def ends_profile(family: GraphFamily, levels: Iterable[int], horizon_offset: int) -> list[tuple[int, int, int]]:
    """Per level ``n``: (n, infinite components, finite components) at horizon ``n + horizon_offset``."""
    if horizon_offset < 1:
        raise HorizonError("Horizon offset must be at least 1.")
    rows = []
    for n in levels:
        components = complement_components(family, n, n + horizon_offset)
        infinite = sum(1 for c in components if c.infinite)
        rows.append((n, infinite, len(components) - infinite))
    return rows


@dataclass(frozen=True)
class EdgePath:
    """Edge path from ``start``; each step is ``(edge_id, sign)``, sign +1 walking a -> b."""

    start: str
    steps: tuple[tuple[str, int], ...] = ()

    def walk(self, graph: FiniteGraph) -> list[str]:
        """Vertices visited, in order; raises :class:`PathError` for foreign edges or gaps."""
        if self.start not in graph.vertex_index:
            raise PathError(f"Path starts at '{self.start}', which is not a vertex of the graph.")
        visited = [self.start]
        current = self.start
        for position, (edge_id, sign) in enumerate(self.steps):
            if edge_id not in graph.edge_map:
                raise PathError(f"Step {position}: edge '{edge_id}' is not in the graph.")
            edge = graph.edge_map[edge_id]
            tail, head = (edge.a, edge.b) if sign > 0 else (edge.b, edge.a)
            if tail != current:
                raise PathError(f"Step {position}: edge '{edge_id}' does not leave '{current}'.")
            current = head
            visited.append(current)
        return visited

    def end(self, graph: FiniteGraph) -> str:
        return self.walk(graph)[-1]

    def is_closed(self, graph: FiniteGraph) -> bool:
        return self.end(graph) == self.start

    def then(self, other: "EdgePath") -> "EdgePath":
        return EdgePath(self.start, self.steps + other.steps)

    def inverse(self, graph: FiniteGraph) -> "EdgePath":
        return EdgePath(self.end(graph), tuple((edge_id, -sign) for edge_id, sign in reversed(self.steps)))

    def signed_ids(self) -> list[str]:
        return [("+" if sign > 0 else "-") + edge_id for edge_id, sign in self.steps]


def parse_signed_edge(token: str) -> tuple[str, int]:
    """``"+id"``/``"id"`` -> (id, +1); ``"-id"`` -> (id, -1)."""
    if token.startswith("-"):
        return token[1:], -1
    if token.startswith("+"):
        return token[1:], +1
    return token, +1
