"""Spanning trees, chord alphabets, words in free groups and homomorphisms between them.

A word over a free group of rank ``r`` is stored as a tuple of nonzero signed
integers: ``+k`` is the k-th generator (1-based) and ``-k`` its inverse. The same
encoding is used in JSON output.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from core.errors import (
    AlphabetMismatchError,
    ContainmentError,
    DisconnectedGraphError,
    HomomorphismError,
    PathError,
)
from core.graph_model import EdgePath, FiniteGraph, id_key
from core.truncation import GraphMap, apply_graph_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpanningTree:
    """Spanning tree rooted at the basepoint; chords are the free generators of π1."""

    graph: FiniteGraph = field(repr=False)
    parent: dict[str, tuple[str, str]] = field(repr=False)
    order: tuple[str, ...] = field(repr=False)
    chords: tuple[str, ...]

    @cached_property
    def tree_edges(self) -> frozenset[str]:
        return frozenset(edge_id for _, edge_id in self.parent.values())

    @cached_property
    def chord_index(self) -> dict[str, int]:
        return {edge_id: i for i, edge_id in enumerate(self.chords)}

    @cached_property
    def chord_sign(self) -> dict[str, int]:
        """+1 when the canonical orientation (smaller endpoint to larger) is the stored one."""
        signs = {}
        for edge_id in self.chords:
            edge = self.graph.edge(edge_id)
            signs[edge_id] = -1 if id_key(edge.b) < id_key(edge.a) else +1
        return signs

    @property
    def rank(self) -> int:
        return len(self.chords)


def _first_encounter_chords(graph: FiniteGraph, order: Iterable[str], tree_edges: set[str]) -> tuple[str, ...]:
    chords: dict[str, None] = {}
    for vertex in order:
        for inc in graph.incidence[vertex]:
            if inc.edge_id not in tree_edges:
                chords.setdefault(inc.edge_id, None)
    return tuple(chords)


def spanning_tree(graph: FiniteGraph) -> SpanningTree:
    """Breadth-first spanning tree from the basepoint.

    Neighbors are visited in vertex-id order and parallel edges in edge-id order.
    Chords are listed in the order they are first met when scanning vertices in
    BFS order.
    """
    if not graph.is_connected():
        raise DisconnectedGraphError("Cannot build a spanning tree of a disconnected graph.")
    parent: dict[str, tuple[str, str]] = {}
    seen = {graph.basepoint}
    order = [graph.basepoint]
    queue = deque([graph.basepoint])
    while queue:
        vertex = queue.popleft()
        for inc in graph.incidence[vertex]:
            if inc.neighbor not in seen:
                seen.add(inc.neighbor)
                parent[inc.neighbor] = (vertex, inc.edge_id)
                order.append(inc.neighbor)
                queue.append(inc.neighbor)
    tree_edges = {edge_id for _, edge_id in parent.values()}
    chords = _first_encounter_chords(graph, order, tree_edges)
    return SpanningTree(graph=graph, parent=parent, order=tuple(order), chords=chords)


def extend_spanning_tree(sub: SpanningTree, graph: FiniteGraph) -> SpanningTree:
    """Spanning tree of ``graph`` containing every tree edge of ``sub``.

    The subgraph's vertices are kept in their order and the rest of ``graph``
    is reached breadth-first from them, so chords of the subgraph stay chords.
    """
    if not graph.contains(sub.graph) or sub.graph.basepoint != graph.basepoint:
        raise ContainmentError("The subtree's graph is not a based subgraph of the target graph.")
    if not graph.is_connected():
        raise DisconnectedGraphError("Cannot extend a spanning tree into a disconnected graph.")
    parent = dict(sub.parent)
    seen = set(sub.order)
    order = list(sub.order)
    queue = deque(sub.order)
    while queue:
        vertex = queue.popleft()
        for inc in graph.incidence[vertex]:
            if inc.neighbor not in seen:
                seen.add(inc.neighbor)
                parent[inc.neighbor] = (vertex, inc.edge_id)
                order.append(inc.neighbor)
                queue.append(inc.neighbor)
    tree_edges = {edge_id for _, edge_id in parent.values()}
    chords = _first_encounter_chords(graph, order, tree_edges)
    return SpanningTree(graph=graph, parent=parent, order=tuple(order), chords=chords)


def tree_path(tree: SpanningTree, vertex: str) -> EdgePath:
    """The tree path from the basepoint to ``vertex``."""
    if vertex not in tree.graph.vertex_index:
        raise PathError(f"'{vertex}' is not a vertex of the tree's graph.")
    steps: list[tuple[str, int]] = []
    current = vertex
    while current != tree.graph.basepoint:
        up, edge_id = tree.parent[current]
        edge = tree.graph.edge(edge_id)
        steps.append((edge_id, +1 if edge.b == current and edge.a == up else -1))
        current = up
    return EdgePath(tree.graph.basepoint, tuple(reversed(steps)))


@dataclass(frozen=True)
class Word:
    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for letter in self.letters:
            if letter == 0 or abs(letter) > self.rank:
                raise AlphabetMismatchError(f"Letter {letter} is outside the alphabet of rank {self.rank}.")

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_reduced(self) -> bool:
        return all(a != -b for a, b in zip(self.letters, self.letters[1:]))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"e{abs(x)}" if x > 0 else f"e{abs(x)}^-1" for x in self.letters)


def reduce(word: Word) -> Word:
    """Free reduction in one left-to-right stack pass."""
    stack: list[int] = []
    for letter in word.letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return Word(word.rank, tuple(stack))


def cyclic_reduce(word: Word) -> Word:
    letters = reduce(word).letters
    start, end = 0, len(letters)
    while end - start >= 2 and letters[start] == -letters[end - 1]:
        start += 1
        end -= 1
    return Word(word.rank, letters[start:end])


def _check_alphabet(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise AlphabetMismatchError(f"Words over ranks {u.rank} and {v.rank} cannot be combined.")


def concat(u: Word, v: Word) -> Word:
    _check_alphabet(u, v)
    return reduce(Word(u.rank, u.letters + v.letters))


def invert(word: Word) -> Word:
    return reduce(Word(word.rank, tuple(-x for x in reversed(word.letters))))


def equal(u: Word, v: Word) -> bool:
    _check_alphabet(u, v)
    return reduce(u).letters == reduce(v).letters


def word_to_json(word: Word) -> list[int]:
    return list(word.letters)


def word_from_json(letters: Sequence[int], rank: int) -> Word:
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in letters):
        raise AlphabetMismatchError("Word JSON must be a list of nonzero integers.")
    return Word(rank, tuple(letters))


def trace_word(path: EdgePath, tree: SpanningTree) -> Word:
    """Record chord crossings of a closed path, signed against each chord's canonical orientation."""
    visited = path.walk(tree.graph)
    if visited[-1] != path.start:
        raise PathError(f"Path from '{path.start}' ends at '{visited[-1]}'; a closed path is required.")
    letters = tuple(
        sign * tree.chord_sign[edge_id] * (tree.chord_index[edge_id] + 1)
        for edge_id, sign in path.steps
        if edge_id in tree.chord_index
    )
    return Word(tree.rank, letters)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism of free groups given by the images of the source generators."""

    source_rank: int
    target_rank: int
    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.source_rank:
            raise HomomorphismError(f"Expected {self.source_rank} generator images, got {len(self.images)}.")
        for image in self.images:
            if image.rank != self.target_rank:
                raise HomomorphismError(f"Generator image over rank {image.rank}, expected {self.target_rank}.")

    @classmethod
    def identity(cls, rank: int) -> "GroupHom":
        return cls(rank, rank, tuple(Word(rank, (i + 1,)) for i in range(rank)))


def apply_hom(hom: GroupHom, word: Word) -> Word:
    if word.rank != hom.source_rank:
        raise AlphabetMismatchError(f"Word over rank {word.rank} fed to a homomorphism from rank {hom.source_rank}.")
    letters: list[int] = []
    for letter in word.letters:
        image = hom.images[abs(letter) - 1].letters
        letters.extend(image if letter > 0 else (-x for x in reversed(image)))
    return reduce(Word(hom.target_rank, tuple(letters)))


def compose_hom(outer: GroupHom, inner: GroupHom) -> GroupHom:
    """``outer ∘ inner``."""
    if inner.target_rank != outer.source_rank:
        raise AlphabetMismatchError(
            f"Cannot compose: inner lands in rank {inner.target_rank}, outer starts at rank {outer.source_rank}."
        )
    return GroupHom(inner.source_rank, outer.target_rank, tuple(apply_hom(outer, image) for image in inner.images))


def chord_loop(tree: SpanningTree, edge_id: str) -> EdgePath:
    """Based loop for a chord: tree path to its tail, the chord, tree path back from its head."""
    edge = tree.graph.edge(edge_id)
    sign = tree.chord_sign[edge_id]
    tail, head = (edge.a, edge.b) if sign > 0 else (edge.b, edge.a)
    out = tree_path(tree, tail)
    back = tree_path(tree, head).inverse(tree.graph)
    return out.then(EdgePath(tail, ((edge_id, sign),))).then(back)


def induced_hom(graph_map: GraphMap, source_tree: SpanningTree, target_tree: SpanningTree) -> GroupHom:
    """Homomorphism π1(Γ_m) -> π1(Γ_n) induced by a bonding map, in the two chord bases."""
    if source_tree.graph != graph_map.source.graph or target_tree.graph != graph_map.target.graph:
        raise HomomorphismError("Spanning trees do not belong to the source and target of the map.")
    images = []
    for edge_id in source_tree.chords:
        image_path = apply_graph_map(graph_map, chord_loop(source_tree, edge_id))
        images.append(reduce(trace_word(image_path, target_tree)))
    return GroupHom(source_tree.rank, target_tree.rank, tuple(images))


def inclusion_hom(sub: SpanningTree, extended: SpanningTree) -> GroupHom:
    """Letter renaming induced by the inclusion of a subgraph whose tree was extended."""
    images = []
    for edge_id in sub.chords:
        if edge_id not in extended.chord_index:
            raise HomomorphismError(f"Chord '{edge_id}' of the subgraph is not a chord of the extended tree.")
        sign = sub.chord_sign[edge_id] * extended.chord_sign[edge_id]
        images.append(Word(extended.rank, (sign * (extended.chord_index[edge_id] + 1),)))
    return GroupHom(sub.rank, extended.rank, tuple(images))
