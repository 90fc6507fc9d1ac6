import itertools

import pytest

from core.errors import AlphabetMismatchError, LevelError
from core.freegroup import Word, compose_hom, concat
from core.graph_model import build_family
from core.invlimit import (
    bonding_hom,
    check_coherence,
    concat_families,
    distinguish,
    family_from_words,
    letter_multiplicity,
    level_pairs,
    level_tree,
    psi_family,
)
from core.loops import builtin_loop

BUILTIN = ["trivial", "square", "roundtrip", "backtrack", "figure4"]

KITE = {
    "name": "kite",
    "basepoint": "a",
    "levels": [
        {"vertices_at_level": ["a"], "edges": []},
        {"vertices_at_level": ["b", "c"], "edges": [["ab", "a", "b"], ["ac", "a", "c"]]},
        {"vertices_at_level": ["d"], "edges": [["bc", "b", "c"], ["bd", "b", "d"], ["cd", "c", "d"]]},
    ],
}


def test_level_pairs_count():
    assert len(list(level_pairs(8))) == 28
    assert list(level_pairs(3)) == [(2, 1), (3, 2), (3, 1)]


@pytest.mark.parametrize("loop_name", BUILTIN)
def test_psi_families_are_coherent(ladder, loop_name):
    fam = psi_family(builtin_loop(ladder, loop_name), ladder, 8)
    report = check_coherence(fam)
    assert report.passed
    assert report.pairs_checked == 28


def test_line_backtrack_is_coherent(line):
    fam = psi_family(builtin_loop(line, "backtrack"), line, 6)
    assert check_coherence(fam).passed
    assert all(word.letters == () for word in fam.levels.values())


def test_square_family(ladder):
    fam = psi_family(builtin_loop(ladder, "square"), ladder, 6)
    assert fam.levels[1].letters == (-1,)
    assert fam.levels[2].letters == (1, -2)
    for n in range(3, 7):
        assert fam.levels[n] == Word(n, (-1,))


def test_roundtrip_lengths_grow(ladder):
    fam = psi_family(builtin_loop(ladder, "roundtrip"), ladder, 6)
    lengths = [len(fam.levels[n]) for n in range(1, 7)]
    assert lengths == [1, 1, 2, 3, 4, 5]
    assert all(a < b for a, b in zip(lengths[1:], lengths[2:]))


def test_backtrack_is_empty(ladder):
    fam = psi_family(builtin_loop(ladder, "backtrack"), ladder, 6)
    assert all(word.letters == () for word in fam.levels.values())


def test_forced_counterexample_fails_at_three_two(ladder):
    fam = psi_family(builtin_loop(ladder, "figure4"), ladder, 4)
    levels = dict(fam.levels)
    levels[2] = Word(2, (1,))
    report = check_coherence(family_from_words(ladder, levels))
    assert not report.passed
    assert report.failing_pair == (3, 2)


def test_empty_family_is_coherent(ladder):
    levels = {n: Word(level_tree(ladder, n).rank) for n in range(1, 6)}
    assert check_coherence(family_from_words(ladder, levels)).passed


def test_family_from_words_checks_rank(ladder):
    with pytest.raises(AlphabetMismatchError):
        family_from_words(ladder, {1: Word(3)})


def test_levels_must_be_contiguous(ladder):
    with pytest.raises(LevelError):
        family_from_words(ladder, {1: Word(1), 3: Word(3)})


def test_psi_is_levelwise_homomorphism(ladder):
    names = ["square", "roundtrip", "figure4", "backtrack"]
    for first, second in itertools.product(names, repeat=2):
        a, b = builtin_loop(ladder, first), builtin_loop(ladder, second)
        joined = psi_family(a + b, ladder, 6)
        product = concat_families(psi_family(a, ladder, 6), psi_family(b, ladder, 6))
        assert distinguish(joined, product) is None


def test_inverse_loop_gives_inverse_words(ladder):
    loop = builtin_loop(ladder, "figure4")
    fam = psi_family(loop + loop.inverse(), ladder, 5)
    assert all(word.letters == () for word in fam.levels.values())


def test_builtin_loops_are_distinguishable(ladder):
    fams = {name: psi_family(builtin_loop(ladder, name), ladder, 6) for name in ["square", "roundtrip", "figure4", "trivial"]}
    for a, b in itertools.combinations(fams, 2):
        level = distinguish(fams[a], fams[b])
        assert level is not None and level <= 6


def test_roundtrip_multiplicities(ladder):
    rows = letter_multiplicity(psi_family(builtin_loop(ladder, "roundtrip"), ladder, 6))
    assert [row.edge_id for row in rows] == [f"top:{i}" for i in range(5)]
    assert all(set(row.counts) == {1} for row in rows)
    assert [row.first_level for row in rows] == [2, 3, 4, 5, 6]


def test_figure4_multiplicities(ladder):
    rows = {row.edge_id: row for row in letter_multiplicity(psi_family(builtin_loop(ladder, "figure4"), ladder, 6))}
    assert rows["top:0"].counts == (2, 2, 2, 2, 2)
    for i in range(1, 5):
        assert set(rows[f"top:{i}"].counts) == {4}
        assert rows[f"top:{i}"].stabilized
    assert not any(edge_id.startswith("rung") for edge_id in rows)


def test_square_twice_multiplicity(ladder):
    square = builtin_loop(ladder, "square")
    rows = {row.edge_id: row for row in letter_multiplicity(psi_family(square.power(2), ladder, 6))}
    assert rows["top:0"].counts == (2, 2, 2, 2, 2)


def test_bonding_homs_are_functorial(ladder):
    for l in range(1, 7):
        for m in range(1, l + 1):
            for n in range(1, m + 1):
                assert compose_hom(bonding_hom(ladder, m, n), bonding_hom(ladder, l, m)) == bonding_hom(ladder, l, n)


def test_concat_families_matches_word_concat(ladder):
    a = psi_family(builtin_loop(ladder, "square"), ladder, 4)
    b = psi_family(builtin_loop(ladder, "roundtrip"), ladder, 4)
    product = concat_families(a, b)
    assert all(product.levels[n] == concat(a.levels[n], b.levels[n]) for n in range(1, 5))


def test_prefix_words_are_not_coherent(ladder):
    # e_1 ... e_{n-1} at every level n
    levels = {n: Word(level_tree(ladder, n).rank, tuple(range(1, n))) for n in range(1, 7)}
    report = check_coherence(family_from_words(ladder, levels, name="prefix"))
    assert not report.passed
    assert report.failing_pair == (3, 2)
    assert report.pairs_checked == 2


def test_top_level_chords_need_one_more_level(ladder):
    rows = letter_multiplicity(psi_family(builtin_loop(ladder, "roundtrip"), ladder, 6))
    assert "rung:5" not in {row.edge_id for row in rows}
    assert rows[-1].edge_id == "top:4" and rows[-1].counts == (1,)


def test_shallow_table_keeps_only_repeated_chords():
    kite = build_family("table", {"table": KITE})
    levels = {n: Word(level_tree(kite, n).rank) for n in (1, 2)}
    assert letter_multiplicity(family_from_words(kite, levels)) == []
