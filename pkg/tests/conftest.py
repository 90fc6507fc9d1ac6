import numpy as np
import pytest

from core import config
from core.freegroup import Word
from core.graph_model import Edge, FiniteGraph, build_family


@pytest.fixture(scope="session")
def ladder():
    return build_family("ladder")


@pytest.fixture(scope="session")
def line():
    return build_family("line")


@pytest.fixture(scope="session")
def tree3():
    return build_family("tree", {"degree": 3})


@pytest.fixture
def rng():
    return np.random.default_rng(config.RANDOM_SEED)


@pytest.fixture
def triangle():
    return FiniteGraph.from_parts(
        ["a", "b", "c"],
        [Edge("ab", "a", "b"), Edge("bc", "b", "c"), Edge("ca", "c", "a")],
        "a",
    )


def random_word(rng, rank, length):
    letters = rng.integers(1, rank + 1, size=length) * rng.choice([-1, 1], size=length)
    return Word(rank, tuple(int(x) for x in letters))


def random_balanced_word(rng, rank, max_pairs):
    """A word with every exponent sum zero, at most ``max_pairs`` letter pairs."""
    count = int(rng.integers(1, max_pairs + 1))
    generators = rng.integers(1, rank + 1, size=count)
    letters = [int(g) for g in generators] + [-int(g) for g in generators]
    order = rng.permutation(len(letters))
    return Word(rank, tuple(letters[i] for i in order))
