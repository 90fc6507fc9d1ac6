"""Abelianization, cycle-space checks and exact commutator length in free groups.

The commutator length of a word in the commutator subgroup is the minimum,
over all pairings of its letters with their inverses, of half the GF(2) rank of
the linking matrix of the pairing read as chords of a circle.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterator, Literal, Sequence

import numpy as np
from joblib import Parallel, delayed

from core import config
from core.errors import PairingCapExceeded, PairingError
from core.freegroup import Word, reduce, trace_word
from core.graph_model import EdgePath, GraphFamily
from core.invlimit import level_tree
from core.loops import LoopSpec
from core.truncation import theta_trace
from utils.gf2_helper import gf2_rank, int_det, ones_off_diagonal

logger = logging.getLogger(__name__)

Coefficients = Literal["Z", "Z2"]


def exponent_sums(word: Word) -> dict[int, int]:
    """Signed count per generator (1-based) occurring in ``word``."""
    sums: Counter[int] = Counter()
    for letter in word.letters:
        sums[abs(letter)] += 1 if letter > 0 else -1
    return dict(sorted(sums.items()))


def in_commutator_subgroup(word: Word) -> bool:
    return all(total == 0 for total in exponent_sums(word).values())


def homology_class(word: Word, coefficients: Coefficients = "Z") -> tuple[int, ...]:
    """Image of ``word`` in H_1 = Z^rank, or (Z/2)^rank."""
    sums = exponent_sums(word)
    vector = tuple(sums.get(g, 0) for g in range(1, word.rank + 1))
    return tuple(x % 2 for x in vector) if coefficients == "Z2" else vector


def cycle_space_trivial(path: EdgePath, coefficients: Coefficients = "Z") -> bool:
    """Z: every edge is crossed equally often in both directions. Z2: every edge is crossed an even number of times."""
    if coefficients == "Z2":
        crossings = Counter(edge_id for edge_id, _ in path.steps)
        return all(count % 2 == 0 for count in crossings.values())
    signed: Counter[str] = Counter()
    for edge_id, sign in path.steps:
        signed[edge_id] += sign
    return all(total == 0 for total in signed.values())


@dataclass(frozen=True)
class Pairing:
    """Perfect matching of letter positions; each pair is (position of e, position of e^-1)."""

    word: Word
    pairs: tuple[tuple[int, int], ...]

    def chords(self) -> list[tuple[int, int]]:
        """Pairs as circle chords (smaller position first), ordered by their first endpoint."""
        return sorted(tuple(sorted(pair)) for pair in self.pairs)

    def to_dict(self) -> dict:
        return {"pairs": [list(pair) for pair in self.pairs]}


def _positions(word: Word) -> list[tuple[list[int], list[int]]]:
    sums = exponent_sums(word)
    unbalanced = {g: s for g, s in sums.items() if s != 0}
    if unbalanced:
        raise PairingError(f"Word is not in the commutator subgroup; exponent sums {unbalanced}.")
    groups = []
    for generator in sums:
        plus = [i for i, x in enumerate(word.letters) if x == generator]
        minus = [i for i, x in enumerate(word.letters) if x == -generator]
        groups.append((plus, minus))
    return groups


def pairing_count(word: Word) -> int:
    """Product over generators of m_g!, m_g the number of positive occurrences."""
    return math.prod(math.factorial(len(plus)) for plus, _ in _positions(word))


def _raw_pairings(word: Word) -> Iterator[tuple[tuple[int, int], ...]]:
    groups = _positions(word)
    choices = [
        [tuple(zip(plus, perm)) for perm in itertools.permutations(minus)]
        for plus, minus in groups
    ]
    for combo in itertools.product(*choices):
        yield tuple(pair for block in combo for pair in block)


def enumerate_pairings(word: Word) -> Iterator[Pairing]:
    """Every pairing of ``word``, generator by generator, in a fixed order."""
    for pairs in _raw_pairings(word):
        yield Pairing(word, pairs)


def _linking_matrix(pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    chords = sorted(tuple(sorted(pair)) for pair in pairs)
    if not chords:
        return np.zeros((0, 0), dtype=np.uint8)
    ends = np.asarray(chords, dtype=np.int64)
    s, e = ends[:, 0], ends[:, 1]
    linked = ((s[:, None] < s[None, :]) & (s[None, :] < e[:, None]) & (e[:, None] < e[None, :])) | (
        (s[None, :] < s[:, None]) & (s[:, None] < e[None, :]) & (e[None, :] < e[:, None])
    )
    return linked.astype(np.uint8)


def circle_matrix(pairing: Pairing) -> np.ndarray:
    """Linking matrix of the pairing's chords on the circle, rows ordered by :meth:`Pairing.chords`.

    Two chords are linked when their endpoints interleave around the circle.
    """
    return _linking_matrix(pairing.pairs)


def ladder_matrix(n: int) -> np.ndarray:
    return ones_off_diagonal(n)


@dataclass(frozen=True)
class CommLengthResult:
    word: Word
    cl: int | None
    pairings_considered: int
    witness: Pairing | None = None

    @property
    def in_commutator_subgroup(self) -> bool:
        return self.cl is not None

    def to_dict(self) -> dict:
        return {
            "word": list(self.word.letters),
            "rank": self.word.rank,
            "pairings_considered": self.pairings_considered,
            "cl": self.cl,
            "witness": None if self.witness is None else [list(pair) for pair in self.witness.pairs],
        }


def _best_in_batch(batch: list[tuple[tuple[int, int], ...]]) -> tuple[int, int]:
    best_rank, best_offset = -1, -1
    for offset, pairs in enumerate(batch):
        rank = gf2_rank(_linking_matrix(pairs))
        if best_rank < 0 or rank < best_rank:
            best_rank, best_offset = rank, offset
    return best_rank, best_offset


def _batches(word: Word, size: int) -> Iterator[list[tuple[tuple[int, int], ...]]]:
    stream = _raw_pairings(word)
    while batch := list(itertools.islice(stream, size)):
        yield batch


def commutator_length(
    word: Word,
    cap: int | None = None,
    n_jobs: int | None = None,
    batch_size: int | None = None,
    logger_func: Callable[[str], None] | None = None,
) -> CommLengthResult:
    """Exact commutator length of ``word``; ``cl`` is None outside the commutator subgroup.

    The word is freely reduced first. The witness is the first minimizing
    pairing in enumeration order, independently of the number of workers.
    """
    log = logger_func or logger.debug
    cap = config.PAIRING_CAP if cap is None else cap
    n_jobs = config.PAIRING_N_JOBS if n_jobs is None else n_jobs
    batch_size = config.PAIRING_BATCH_SIZE if batch_size is None else batch_size

    reduced = reduce(word)
    if not in_commutator_subgroup(reduced):
        return CommLengthResult(word=reduced, cl=None, pairings_considered=0)

    count = pairing_count(reduced)
    if count > cap:
        raise PairingCapExceeded(count, cap)
    log(f"Evaluating {count} pairings of a word of length {len(reduced)}")

    if n_jobs == 1:
        results = [_best_in_batch(batch) for batch in _batches(reduced, batch_size)]
    else:
        results = Parallel(n_jobs=n_jobs)(
            delayed(_best_in_batch)(batch) for batch in _batches(reduced, batch_size)
        )

    best_rank, best_index = min(
        (rank, batch_no * batch_size + offset) for batch_no, (rank, offset) in enumerate(results)
    )
    witness_pairs = next(itertools.islice(_raw_pairings(reduced), best_index, None))
    return CommLengthResult(
        word=reduced,
        cl=best_rank // 2,
        pairings_considered=count,
        witness=Pairing(reduced, witness_pairs),
    )


def ladder_word(n: int) -> Word:
    """e_1 ... e_n e_1^-1 ... e_n^-1 over rank n."""
    return Word(n, tuple(range(1, n + 1)) + tuple(-g for g in range(1, n + 1)))


@dataclass(frozen=True)
class LadderRow:
    n: int
    det: int
    rank: int
    cl: int

    def to_dict(self) -> dict:
        return {"n": self.n, "det": self.det, "rank": self.rank, "cl": self.cl}


def ladder_table(lo: int, hi: int) -> list[LadderRow]:
    """(n, det M_n, GF(2) rank of M_n, commutator length of the n-th ladder word) for lo <= n <= hi."""
    rows = []
    for n in range(lo, hi + 1):
        matrix = ladder_matrix(n)
        rows.append(
            LadderRow(
                n=n,
                det=int_det(matrix),
                rank=gf2_rank(matrix),
                cl=commutator_length(ladder_word(n)).cl,
            )
        )
    return rows


@dataclass(frozen=True)
class HomologyRow:
    level: int
    word: Word
    cl: int | None
    pairings_considered: int
    z_trivial: bool
    z2_trivial: bool

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "word": list(self.word.letters),
            "in_commutator_subgroup": self.cl is not None,
            "cl": self.cl,
            "pairings_considered": self.pairings_considered,
            "cycle_space_trivial": {"Z": self.z_trivial, "Z2": self.z2_trivial},
        }


@dataclass(frozen=True)
class HomologyReport:
    loop: str
    family: str
    rows: tuple[HomologyRow, ...]

    @property
    def evidence(self) -> bool:
        """cl grows while every level stays in [F,F] and is trivial in the Z cycle space."""
        if len(self.rows) < 2 or any(row.cl is None or not row.z_trivial for row in self.rows):
            return False
        cls = [row.cl for row in self.rows]
        return all(a <= b for a, b in zip(cls, cls[1:])) and cls[-1] > cls[0]

    def to_dict(self) -> dict:
        return {
            "loop": self.loop,
            "family": self.family,
            "rows": [row.to_dict() for row in self.rows],
            "nonnullhomologous_evidence": self.evidence,
        }


def nonnullhomologous_report(
    loop: LoopSpec,
    family: GraphFamily,
    top: int,
    logger_func: Callable[[str], None] | None = None,
) -> HomologyReport:
    """Commutator length and cycle-space verdicts of the level traces of ``loop`` for n = 1..top."""
    log = logger_func or logger.debug
    rows = []
    for n in range(1, top + 1):
        path = theta_trace(loop, family, n)
        word = reduce(trace_word(path, level_tree(family, n)))
        result = commutator_length(word, logger_func=log)
        rows.append(
            HomologyRow(
                level=n,
                word=word,
                cl=result.cl,
                pairings_considered=result.pairings_considered,
                z_trivial=cycle_space_trivial(path, "Z"),
                z2_trivial=cycle_space_trivial(path, "Z2"),
            )
        )
        log(f"{loop.name} level {n}: cl={result.cl}")
    return HomologyReport(loop=loop.name, family=family.name, rows=tuple(rows))
