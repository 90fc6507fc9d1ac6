"""Finite quotients Γ_n of a family, loop traces into them, and the bonding maps between levels.

Γ_n keeps every vertex at distance <= n - 1 from the basepoint and collapses each
component of the subgraph induced on distance >= n to one vertex ``C:n:i``.
Quotient edges keep their original id and stored orientation; only endpoints
are replaced by their images. Edges with both endpoints at distance >= n vanish.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from core import config
from core.errors import LevelError, LoopSpecError, PathError
from core.graph_model import (
    ComplementPartition,
    Edge,
    EdgePath,
    FiniteGraph,
    GraphFamily,
    RayBlock,
    ball,
    collapsed_id,
    complement_partition,
    id_key,
    is_collapsed_id,
)
from core.loops import ExplicitPath, LoopSpec, RayBack, RayOut

logger = logging.getLogger(__name__)

# Consecutive ray blocks allowed at the same depth before a ray is declared stalled.
RAY_STALL_LIMIT = 256


@dataclass(frozen=True, eq=False)
class QuotientGraph:
    """Γ_n together with the data of its collapse map."""

    family: GraphFamily = field(repr=False)
    level: int
    graph: FiniteGraph
    collapsed: Mapping[int, str]
    origin: Mapping[str, Edge] = field(repr=False)
    partition: ComplementPartition = field(repr=False)

    def vertex_image(self, vertex: str) -> str:
        """Image in Γ_n of an original vertex (or of a collapsed vertex of a finer level)."""
        if is_collapsed_id(vertex):
            level = int(vertex.split(":")[1])
            if level < self.level:
                raise LevelError(f"Collapsed vertex '{vertex}' belongs to a coarser level than {self.level}.")
            return self.vertex_image(_collapsed_representative(self.family, vertex))
        if self.family.distance(vertex) < self.level:
            return vertex
        return self.collapsed[_component_index(self.family, self.partition, vertex)]

    def keeps_edge(self, edge: Edge) -> bool:
        """False when both endpoints lie at distance >= n, so the edge vanishes in Γ_n."""
        return min(self.family.distance(edge.a), self.family.distance(edge.b)) < self.level

    def betti_number(self) -> int:
        return self.graph.betti_number()


def _component_index(family: GraphFamily, partition: ComplementPartition, vertex: str) -> int:
    # Vertices past the partition radius descend along a geodesic, which stays at
    # distance >= level and therefore inside one complement component.
    current = vertex
    while current not in partition.component_of:
        depth = family.distance(current)
        if depth < partition.level:
            raise LoopSpecError(f"Vertex '{vertex}' is not beyond level {partition.level}.")
        lower = sorted(
            (edge.other(current) for edge in family.generator.incident_edges(current)
             if family.distance(edge.other(current)) == depth - 1),
            key=id_key,
        )
        if not lower:
            raise LoopSpecError(f"Vertex '{current}' has no neighbor closer to the basepoint.")
        current = lower[0]
    return partition.component_of[current]


def _collapsed_representative(family: GraphFamily, vertex: str) -> str:
    _, level, index = vertex.split(":")
    return truncate(family, int(level)).partition.frontiers[int(index)][0]


@lru_cache(maxsize=256)
def partition_radius(family: GraphFamily, n: int) -> int:
    """Radius at which the components of Γ ∖ B°(p, n) are read off.

    Table families are partitioned over their whole generated region. Otherwise
    the radius starts at n + COLLAPSE_HORIZON and grows one step at a time until
    the component count stops dropping; components only ever merge as it grows.
    """
    limit = family.generator.max_radius()
    if limit is not None:
        return max(limit, n)
    radius = n + config.COLLAPSE_HORIZON
    count = len(complement_partition(family, n, radius).members)
    while True:
        wider = len(complement_partition(family, n, radius + 1).members)
        if wider == count:
            return radius
        logger.debug("Level %d of '%s': %d components merge to %d at radius %d.", n, family.name, count, wider, radius + 1)
        radius, count = radius + 1, wider


@lru_cache(maxsize=256)
def truncate(family: GraphFamily, n: int) -> QuotientGraph:
    """Build Γ_n (n >= 1)."""
    if n < 1:
        raise LevelError(f"Truncation level must be at least 1, got {n}.")
    source = ball(family, n)
    partition = complement_partition(family, n, partition_radius(family, n))
    collapsed = {i: collapsed_id(n, i) for i in range(len(partition.members))}

    def image(vertex: str) -> str:
        if family.distance(vertex) < n:
            return vertex
        return collapsed[partition.component_of[vertex]]

    kept = [v for v in source.vertices if family.distance(v) < n]
    edges: list[Edge] = []
    origin: dict[str, Edge] = {}
    for edge in source.edges:
        if family.distance(edge.a) >= n and family.distance(edge.b) >= n:
            continue
        edges.append(Edge(edge.id, image(edge.a), image(edge.b)))
        origin[edge.id] = edge

    graph = FiniteGraph.from_parts([*kept, *collapsed.values()], edges, source.basepoint)
    logger.debug(
        "Truncated '%s' at level %d: %d vertices, %d edges, %d collapsed.",
        family.name, n, len(graph.vertices), len(graph.edges), len(collapsed),
    )
    return QuotientGraph(
        family=family,
        level=n,
        graph=graph,
        collapsed=collapsed,
        origin=origin,
        partition=partition,
    )


def _block_vertices(family: GraphFamily, block: RayBlock, ray: str, index: int) -> list[str]:
    visited = [block.start]
    for edge_id, sign in block.steps:
        edge = family.edge(edge_id)
        tail, head = (edge.a, edge.b) if sign > 0 else (edge.b, edge.a)
        if tail != visited[-1]:
            raise LoopSpecError(f"Ray '{ray}' block {index}: edge '{edge_id}' does not leave '{visited[-1]}'.")
        visited.append(head)
    return visited


def _ray_blocks(family: GraphFamily, ray: str, start: int, n: int) -> tuple[list[RayBlock], RayBlock]:
    """Blocks of ``ray`` from ``start`` that still reach inside distance n, and the first that does not."""
    blocks: list[RayBlock] = []
    index = start
    previous_depth = -1
    stalled = 0
    previous_end: str | None = None
    while True:
        block = family.ray_block(ray, index)
        vertices = _block_vertices(family, block, ray, index)
        if previous_end is not None and block.start != previous_end:
            raise LoopSpecError(f"Ray '{ray}' breaks between blocks {index - 1} and {index}.")
        depth = min(family.distance(v) for v in vertices)
        if depth < previous_depth:
            raise LoopSpecError(f"Ray '{ray}' turns back towards the basepoint at block {index}.")
        stalled = stalled + 1 if depth == previous_depth else 0
        if stalled > RAY_STALL_LIMIT:
            raise LoopSpecError(f"Ray '{ray}' does not escape: {stalled} blocks at depth {depth}.")
        if depth >= n:
            return blocks, block
        blocks.append(block)
        previous_depth = depth
        previous_end = vertices[-1]
        index += 1


def theta_trace(loop: LoopSpec, family: GraphFamily, n: int) -> EdgePath:
    """Closed edge path at the basepoint of Γ_n traced by ``loop``.

    Ray segments are consumed lazily: only the blocks that still reach inside
    distance n are walked. A :class:`RayOut` ends at the collapsed vertex of
    its component; the following :class:`RayBack` must come back out of the
    same component at this level.
    """
    quotient = truncate(family, n)
    steps: list[tuple[str, int]] = []
    current: str | None = family.basepoint
    at_end: int | None = None

    def emit(edge_id: str, sign: int) -> None:
        if quotient.keeps_edge(family.edge(edge_id)):
            steps.append((edge_id, sign))

    for position, segment in enumerate(loop.segments):
        if isinstance(segment, ExplicitPath):
            if current is None:
                raise LoopSpecError(f"Segment {position}: an explicit path cannot start at an end.")
            for edge_id, sign in segment.steps:
                edge = family.edge(edge_id)
                tail, head = (edge.a, edge.b) if sign > 0 else (edge.b, edge.a)
                if tail != current:
                    raise LoopSpecError(f"Segment {position}: edge '{edge_id}' does not leave '{current}'.")
                emit(edge_id, sign)
                current = head
        elif isinstance(segment, RayOut):
            if current is None:
                raise LoopSpecError(f"Segment {position}: ray '{segment.ray}' cannot leave from an end.")
            blocks, beyond = _ray_blocks(family, segment.ray, segment.start, n)
            first_start = blocks[0].start if blocks else beyond.start
            if first_start != current:
                raise LoopSpecError(f"Segment {position}: ray '{segment.ray}' starts at '{first_start}', not '{current}'.")
            for block in blocks:
                for edge_id, sign in block.steps:
                    emit(edge_id, sign)
            at_end = _component_index(family, quotient.partition, beyond.start)
            current = None
        elif isinstance(segment, RayBack):
            if at_end is None:
                raise LoopSpecError(f"Segment {position}: ray '{segment.ray}' must follow a ray heading to an end.")
            blocks, beyond = _ray_blocks(family, segment.ray, segment.start, n)
            component = _component_index(family, quotient.partition, beyond.start)
            if component != at_end:
                raise LoopSpecError(
                    f"Segment {position}: rays meet in different components "
                    f"({quotient.collapsed[at_end]} and {quotient.collapsed[component]}) at level {n}."
                )
            for block in reversed(blocks):
                for edge_id, sign in reversed(block.steps):
                    emit(edge_id, -sign)
            current = blocks[0].start if blocks else beyond.start
            at_end = None
        else:
            raise LoopSpecError(f"Segment {position}: unsupported segment {segment!r}.")

    if current is None:
        raise LoopSpecError(f"Loop '{loop.name}' ends at an end instead of the basepoint.")
    if current != family.basepoint:
        raise LoopSpecError(f"Loop '{loop.name}' ends at '{current}', not at the basepoint.")

    path = EdgePath(family.basepoint, tuple(steps))
    try:
        path.walk(quotient.graph)
    except PathError as exc:
        raise LoopSpecError(f"Loop '{loop.name}' does not trace a path in level {n}: {exc}") from exc
    return path


@dataclass(frozen=True)
class GraphMap:
    """Cellular map Γ_m -> Γ_n; ``edge_map`` sends an edge to an edge id or to None when it collapses."""

    source: QuotientGraph
    target: QuotientGraph
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str | None]

    def edge_image(self, edge_id: str) -> str | None:
        return self.edge_map[edge_id]


@lru_cache(maxsize=512)
def rho_map(family: GraphFamily, m: int, n: int) -> GraphMap:
    """The bonding map ρ^m_n: Γ_m -> Γ_n for m >= n >= 1."""
    if m < n:
        raise LevelError(f"Bonding maps go from a finer to a coarser level; got m={m} < n={n}.")
    source = truncate(family, m)
    target = truncate(family, n)
    vertex_map = {v: target.vertex_image(v) for v in source.graph.vertices}
    edge_map = {
        edge.id: (edge.id if target.keeps_edge(source.origin[edge.id]) else None)
        for edge in source.graph.edges
    }
    return GraphMap(source=source, target=target, vertex_map=vertex_map, edge_map=edge_map)


def apply_graph_map(graph_map: GraphMap, path: EdgePath) -> EdgePath:
    """Edgewise image of ``path``; collapsed edges are erased."""
    steps = tuple(
        (graph_map.edge_map[edge_id], sign)
        for edge_id, sign in path.steps
        if graph_map.edge_map[edge_id] is not None
    )
    return EdgePath(graph_map.vertex_map[path.start], steps)


def compose(outer: GraphMap, inner: GraphMap) -> GraphMap:
    """``outer ∘ inner``; ``inner`` must land where ``outer`` starts."""
    if inner.target is not outer.source:
        raise LevelError(
            f"Cannot compose maps: level {inner.target.level} does not match level {outer.source.level}."
        )
    vertex_map = {v: outer.vertex_map[image] for v, image in inner.vertex_map.items()}
    edge_map = {
        edge_id: (None if image is None else outer.edge_map[image])
        for edge_id, image in inner.edge_map.items()
    }
    return GraphMap(source=inner.source, target=outer.target, vertex_map=vertex_map, edge_map=edge_map)


def betti_number(quotient: QuotientGraph) -> int:
    return quotient.betti_number()


def rank_profile(
    family: GraphFamily,
    levels: Iterable[int],
    logger_func: Callable[[str], None] | None = None,
) -> list[tuple[int, int]]:
    """(n, rank of π1(Γ_n)) for every requested level."""
    log = logger_func or logger.debug
    rows = []
    for n in levels:
        rank = truncate(family, n).betti_number()
        log(f"Level {n}: rank {rank}")
        rows.append((n, rank))
    return rows
