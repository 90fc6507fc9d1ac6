import pytest

from core.errors import GeneratorError, HorizonError, PathError, UnknownFamilyError
from core.graph_model import (
    Edge,
    EdgePath,
    FiniteGraph,
    ball,
    bfs_depths,
    complement_components,
    ends_profile,
    id_key,
    parse_signed_edge,
)


def test_id_key_orders_integers_numerically():
    ids = ["b:10", "b:2", "t:0", "C:3:0", "b:-1"]
    assert sorted(ids, key=id_key) == ["b:-1", "b:2", "b:10", "t:0", "C:3:0"]


def test_id_key_integer_parts_before_strings():
    assert id_key("w:0") < id_key("w:x")


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_ladder_ball_counts(ladder, n):
    graph = ball(ladder, n)
    assert len(graph.vertices) == 2 * n + 1
    assert len(graph.edges) == 3 * n - 1


def test_line_ball(line):
    graph = ball(line, 3)
    assert len(graph.vertices) == 7
    assert len(graph.edges) == 6
    assert graph.betti_number() == 0


def test_tree_balls(tree3):
    assert (len(ball(tree3, 0).vertices), len(ball(tree3, 0).edges)) == (1, 0)
    assert (len(ball(tree3, 1).vertices), len(ball(tree3, 1).edges)) == (4, 3)
    assert len(ball(tree3, 3).vertices) == 1 + 3 + 6 + 12


def test_negative_radius_rejected(ladder):
    with pytest.raises(HorizonError):
        ball(ladder, -1)


@pytest.mark.parametrize("name", ["ladder", "line", "tree"])
def test_ball_matches_independent_bfs(name, ladder, line, tree3):
    family = {"ladder": ladder, "line": line, "tree": tree3}[name]
    for n in range(0, 11 if name != "tree" else 7):
        big = ball(family, n + 2)
        depths = bfs_depths(big)
        reachable = {v for v, d in depths.items() if d <= n}
        assert reachable == set(ball(family, n).vertices)


@pytest.mark.parametrize("name", ["ladder", "line", "tree"])
def test_balls_are_connected_and_monotone(name, ladder, line, tree3):
    family = {"ladder": ladder, "line": line, "tree": tree3}[name]
    previous = None
    for n in range(0, 11 if name != "tree" else 7):
        graph = ball(family, n)
        assert graph.is_connected()
        if previous is not None:
            assert graph.contains(previous)
        previous = graph


def test_complement_component_examples(line, ladder, tree3):
    assert [c.finiteness for c in complement_components(line, 2, 8)] == ["infinite", "infinite"]
    assert [c.finiteness for c in complement_components(ladder, 3, 10)] == ["infinite"]
    components = complement_components(tree3, 2, 8)
    assert len(components) == 6
    assert all(c.infinite for c in components)


def test_complement_components_are_named_and_ordered(line):
    components = complement_components(line, 3, 6)
    assert [c.id for c in components] == ["C:3:0", "C:3:1"]
    assert components[0].frontier == ("v:-3",)
    assert components[1].frontier == ("v:3",)


def test_horizon_must_exceed_level(ladder):
    with pytest.raises(HorizonError):
        complement_components(ladder, 3, 3)


def test_end_counts_per_level(line, ladder, tree3):
    for n, infinite, finite in ends_profile(line, range(1, 11), 4):
        assert (infinite, finite) == (2, 0)
    for n, infinite, finite in ends_profile(ladder, range(1, 11), 4):
        assert (infinite, finite) == (1, 0)
    counts = [infinite for _, infinite, _ in ends_profile(tree3, range(1, 9), 2)]
    assert counts == [3 * 2 ** (n - 1) for n in range(1, 9)]


def test_finite_component_detected():
    from core.graph_model import build_family

    # A ray from the basepoint with one pendant vertex hanging off level 1.
    table = {
        "name": "comb",
        "basepoint": "p",
        "levels": [
            {"vertices_at_level": ["p"], "edges": []},
            {"vertices_at_level": ["q", "x"], "edges": [["pq", "p", "q"], ["px", "p", "x"]]},
            {"vertices_at_level": ["r"], "edges": [["qr", "q", "r"]]},
            {"vertices_at_level": ["s"], "edges": [["rs", "r", "s"]]},
            {"vertices_at_level": ["u"], "edges": [["su", "s", "u"]]},
        ],
    }
    family = build_family("table", {"table": table})
    flags = {c.frontier: c.finiteness for c in complement_components(family, 1, 4)}
    assert flags == {("q",): "infinite", ("x",): "finite"}

    # Horizons past the depth of a table are read at the depth.
    assert complement_components(family, 1, 9) == complement_components(family, 1, 4)
    with pytest.raises(HorizonError):
        complement_components(family, 4, 6)


def test_finite_graph_rejects_dangling_edge():
    with pytest.raises(GeneratorError):
        FiniteGraph.from_parts(["a"], [Edge("e", "a", "b")], "a")


def test_multigraph_betti(triangle):
    doubled = FiniteGraph.from_parts(
        triangle.vertices, [*triangle.edges, Edge("ab2", "a", "b"), Edge("loop", "c", "c")], "a"
    )
    assert triangle.betti_number() == 1
    assert doubled.betti_number() == 3
    assert doubled.degree("c") == 4


def test_disconnected_graph_reported():
    graph = FiniteGraph.from_parts(["a", "b"], [], "a")
    assert not graph.is_connected()


def test_edge_path_walk_and_inverse(triangle):
    path = EdgePath("a", (("ab", 1), ("bc", 1), ("ca", 1)))
    assert path.walk(triangle) == ["a", "b", "c", "a"]
    assert path.is_closed(triangle)
    assert path.inverse(triangle).signed_ids() == ["-ca", "-bc", "-ab"]
    with pytest.raises(PathError):
        EdgePath("a", (("bc", 1),)).walk(triangle)


def test_parse_signed_edge():
    assert parse_signed_edge("-rung:0") == ("rung:0", -1)
    assert parse_signed_edge("+top:3") == ("top:3", 1)
    assert parse_signed_edge("e:0") == ("e:0", 1)


def test_unknown_family():
    from core.graph_model import build_family

    with pytest.raises(UnknownFamilyError):
        build_family("mobius")
