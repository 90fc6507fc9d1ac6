import json

import pytest

from core.errors import FamilyParameterError, GeneratorError, LoopSpecError
from core.graph_model import ball, build_family, validate_family
from utils.family_loader import load_table_family

TABLE = {
    "name": "kite",
    "basepoint": "a",
    "levels": [
        {"vertices_at_level": ["a"], "edges": []},
        {"vertices_at_level": ["b", "c"], "edges": [["ab", "a", "b"], ["ac", "a", "c"]]},
        {"vertices_at_level": ["d"], "edges": [["bc", "b", "c"], ["bd", "b", "d"], ["cd", "c", "d"]]},
    ],
    "rays": {"down": [[["ab", 1]], [["bd", 1]]]},
}


def test_tree_degree_must_be_at_least_three():
    with pytest.raises(FamilyParameterError):
        build_family("tree", {"degree": 2})


def test_tree_degree_must_be_integer():
    with pytest.raises(FamilyParameterError):
        build_family("tree", {"degree": "many"})


def test_ladder_takes_no_parameters():
    with pytest.raises(FamilyParameterError):
        build_family("ladder", {"width": 2})


def test_tree_degree_four():
    family = build_family("tree", {"degree": 4})
    assert len(ball(family, 2).vertices) == 1 + 4 + 12


def test_ladder_edges_and_distances(ladder):
    edge = ladder.edge("rung:3")
    assert (edge.a, edge.b) == ("b:3", "t:3")
    assert ladder.distance("t:3") == 4
    with pytest.raises(LoopSpecError):
        ladder.edge("diagonal:1")


def test_ladder_square_block_is_contiguous(ladder):
    block = ladder.ray_block("squares", 2)
    assert block.start == "t:2"
    current = block.start
    for edge_id, sign in block.steps:
        edge = ladder.edge(edge_id)
        tail, head = (edge.a, edge.b) if sign > 0 else (edge.b, edge.a)
        assert tail == current
        current = head
    assert current == "t:3"


def test_table_family_from_dict():
    family = build_family("table", {"table": TABLE})
    graph = ball(family, 2)
    assert graph.vertices == ("a", "b", "c", "d")
    assert graph.betti_number() == 2
    assert family.ray_block("down", 1).start == "b"


def test_table_family_from_file(tmp_path):
    path = tmp_path / "kite.json"
    path.write_text(json.dumps(TABLE), encoding="utf-8")
    data = load_table_family(path)
    assert data.basepoint == "a"
    assert [e.id for e in data.edges] == ["ab", "ac", "bc", "bd", "cd"]


def test_table_family_beyond_region():
    family = build_family("table", {"table": TABLE})
    with pytest.raises(GeneratorError):
        ball(family, 3)


def test_table_rejects_wrong_level():
    bad = json.loads(json.dumps(TABLE))
    bad["levels"][1]["edges"].append(["ad", "a", "d"])
    with pytest.raises(FamilyParameterError):
        build_family("table", {"table": bad})


def test_table_rejects_reserved_prefix():
    bad = json.loads(json.dumps(TABLE))
    bad["levels"][2]["vertices_at_level"] = ["C:1:0"]
    for level in bad["levels"]:
        level["edges"] = [[e[0], e[1], "C:1:0" if e[2] == "d" else e[2]] for e in level["edges"]]
    with pytest.raises(FamilyParameterError):
        build_family("table", {"table": bad})


def test_table_with_wrong_distance_fails_validation():
    bad = {
        "basepoint": "a",
        "levels": [
            {"vertices_at_level": ["a"], "edges": []},
            {"vertices_at_level": ["b"], "edges": [["ab", "a", "b"]]},
            {"vertices_at_level": ["c"], "edges": []},
        ],
    }
    with pytest.raises(GeneratorError):
        build_family("table", {"table": bad})


def test_missing_table_file():
    with pytest.raises(FamilyParameterError):
        build_family("table", {"path": "/nonexistent/family.json"})


def test_validation_stops_at_vertex_budget():
    family = build_family("tree", {"degree": 10})
    assert validate_family(family, 6) == 4
    ladder = build_family("ladder")
    assert validate_family(ladder, 6) == 6
    assert validate_family(ladder, 6, max_vertices=5) == 1
