"""Coherent families of words: finite-level stand-ins for elements of the inverse limit of the F_n."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Mapping

from core.errors import AlphabetMismatchError, LevelError
from core.freegroup import (
    GroupHom,
    SpanningTree,
    Word,
    apply_hom,
    concat,
    induced_hom,
    reduce,
    spanning_tree,
    trace_word,
)
from core.graph_model import GraphFamily
from core.loops import LoopSpec
from core.truncation import rho_map, theta_trace, truncate

logger = logging.getLogger(__name__)


@lru_cache(maxsize=256)
def level_tree(family: GraphFamily, n: int) -> SpanningTree:
    """The canonical BFS spanning tree of Γ_n."""
    return spanning_tree(truncate(family, n).graph)


@lru_cache(maxsize=1024)
def bonding_hom(family: GraphFamily, m: int, n: int) -> GroupHom:
    """ρ^m_n on fundamental groups, in the chord bases of the canonical trees."""
    return induced_hom(rho_map(family, m, n), level_tree(family, m), level_tree(family, n))


def level_pairs(top: int) -> Iterator[tuple[int, int]]:
    """All (m, n) with top >= m > n >= 1, finer level ascending, coarser level descending."""
    for m in range(2, top + 1):
        for n in range(m - 1, 0, -1):
            yield m, n


@dataclass(frozen=True)
class CoherentFamily:
    """Words ``levels[n]`` in F_n for n = 1..N."""

    family: GraphFamily = field(repr=False)
    levels: Mapping[int, Word]
    name: str = ""

    def __post_init__(self) -> None:
        if sorted(self.levels) != list(range(1, len(self.levels) + 1)):
            raise LevelError("Coherent families are indexed by the levels 1..N without gaps.")

    @property
    def top(self) -> int:
        return len(self.levels)

    def homs(self) -> dict[tuple[int, int], GroupHom]:
        return {(m, n): bonding_hom(self.family, m, n) for m, n in level_pairs(self.top)}


@dataclass(frozen=True)
class CoherenceReport:
    passed: bool
    pairs_checked: int
    failing_pair: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "pairs_checked": self.pairs_checked,
            "failing_pair": list(self.failing_pair) if self.failing_pair else None,
        }


def psi_family(
    loop: LoopSpec,
    family: GraphFamily,
    top: int,
    logger_func: Callable[[str], None] | None = None,
) -> CoherentFamily:
    """Levelwise reduced trace words of ``loop`` for n = 1..top."""
    if top < 1:
        raise LevelError(f"The top level must be at least 1, got {top}.")
    log = logger_func or logger.debug
    levels = {}
    for n in range(1, top + 1):
        path = theta_trace(loop, family, n)
        levels[n] = reduce(trace_word(path, level_tree(family, n)))
        log(f"Ψ({loop.name}) at level {n}: {len(path.steps)} edges, reduced length {len(levels[n])}")
    return CoherentFamily(family=family, levels=levels, name=loop.name)


def family_from_words(family: GraphFamily, levels: Mapping[int, Word], name: str = "words") -> CoherentFamily:
    """Wrap user-supplied per-level words so they can be checked for coherence."""
    for n, word in levels.items():
        rank = level_tree(family, n).rank
        if word.rank != rank:
            raise AlphabetMismatchError(f"Level {n} word is over rank {word.rank}, but F_{n} has rank {rank}.")
    return CoherentFamily(family=family, levels=dict(levels), name=name)


def check_coherence(fam: CoherentFamily) -> CoherenceReport:
    """Verify apply(ρ^m_n, levels[m]) == levels[n] for every pair, stopping at the first failure."""
    checked = 0
    for m, n in level_pairs(fam.top):
        checked += 1
        image = apply_hom(bonding_hom(fam.family, m, n), fam.levels[m])
        if image.letters != reduce(fam.levels[n]).letters:
            logger.debug("Coherence of '%s' fails at (%d, %d).", fam.name, m, n)
            return CoherenceReport(passed=False, pairs_checked=checked, failing_pair=(m, n))
    return CoherenceReport(passed=True, pairs_checked=checked)


@dataclass(frozen=True)
class Multiplicity:
    """Occurrence counts of one persistent chord, from its first chord level up to N."""

    edge_id: str
    first_level: int
    counts: tuple[int, ...]

    @property
    def stabilized(self) -> bool:
        return len(set(self.counts)) <= 1

    def to_dict(self) -> dict:
        return {"edge": self.edge_id, "first_level": self.first_level, "counts": list(self.counts)}


def _lookahead_tree(fam: CoherentFamily) -> SpanningTree | None:
    limit = fam.family.generator.max_radius()
    if limit is not None and fam.top + 1 > limit:
        return None
    return level_tree(fam.family, fam.top + 1)


def letter_multiplicity(fam: CoherentFamily) -> list[Multiplicity]:
    """Multiplicity sequences of the persistent chords of a family.

    A chord persists when it stays a chord from its first chord level through
    N + 1. For a table family too shallow to build level N + 1 it must instead be
    a chord at two or more levels up to N. Chords are identified across levels
    by the original edge they come from.
    """
    first: dict[str, int] = {}
    for n in range(1, fam.top + 1):
        for edge_id in level_tree(fam.family, n).chords:
            first.setdefault(edge_id, n)
    lookahead = _lookahead_tree(fam)

    rows = []
    for edge_id, start in first.items():
        trees = [level_tree(fam.family, m) for m in range(start, fam.top + 1)]
        if not all(edge_id in tree.chord_index for tree in trees):
            continue
        if lookahead is None and len(trees) < 2:
            continue
        if lookahead is not None and edge_id not in lookahead.chord_index:
            continue
        counts = []
        for m, tree in zip(range(start, fam.top + 1), trees):
            letter = tree.chord_index[edge_id] + 1
            counts.append(sum(1 for x in fam.levels[m].letters if abs(x) == letter))
        rows.append(Multiplicity(edge_id=edge_id, first_level=start, counts=tuple(counts)))
    return rows


def concat_families(first: CoherentFamily, second: CoherentFamily) -> CoherentFamily:
    if first.family is not second.family or first.top != second.top:
        raise LevelError("Only families over the same graph family and levels can be multiplied.")
    levels = {n: concat(first.levels[n], second.levels[n]) for n in first.levels}
    return CoherentFamily(family=first.family, levels=levels, name=f"{first.name}*{second.name}")


def distinguish(first: CoherentFamily, second: CoherentFamily) -> int | None:
    """First level at which the two families carry different reduced words, or None."""
    for n in range(1, min(first.top, second.top) + 1):
        if reduce(first.levels[n]).letters != reduce(second.levels[n]).letters:
            return n
    return None
