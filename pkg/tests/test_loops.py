import json

import pytest

from core.errors import LoopSpecError
from core.loops import ExplicitPath, LoopSpec, RayBack, RayOut, builtin_loop, load_loop, parse_loop


def test_builtin_loop_lookup(ladder):
    assert builtin_loop(ladder, "figure4").segments[2] == RayOut("squares", 0)
    assert builtin_loop("line", "trivial").segments == ()
    with pytest.raises(LoopSpecError):
        builtin_loop(ladder, "lasso")


def test_loop_inverse_and_product():
    out = LoopSpec("out", (RayOut("bottom"), RayBack("top")))
    inv = out.inverse()
    assert inv.segments == (RayOut("top"), RayBack("bottom"))
    assert (out + inv).segments == out.segments + inv.segments
    assert out.power(-1) == LoopSpec("out^-1^1", inv.segments)


def test_explicit_path_inverse():
    path = ExplicitPath((("a", 1), ("b", -1)))
    assert path.inverse().steps == (("b", 1), ("a", -1))


def test_parse_loop_json():
    loop = parse_loop(
        {
            "name": "mine",
            "segments": [
                {"kind": "ray_out", "ray": "bottom"},
                {"kind": "ray_back", "ray": "top", "start": 0},
                {"kind": "path", "edges": ["-rung:0"]},
            ],
        }
    )
    assert loop == LoopSpec("mine", (RayOut("bottom", 0), RayBack("top", 0), ExplicitPath((("rung:0", -1),))))


@pytest.mark.parametrize(
    "payload",
    [
        [],
        {"segments": [{"kind": "teleport"}]},
        {"segments": [{"kind": "ray_out", "ray": "bottom", "start": -1}]},
        {"segments": [{"kind": "path", "edges": [3]}]},
    ],
)
def test_parse_loop_rejects_malformed(payload):
    with pytest.raises(LoopSpecError):
        parse_loop(payload)


def test_load_loop_file(tmp_path):
    path = tmp_path / "loop.json"
    path.write_text(json.dumps({"segments": [{"kind": "path", "edges": ["+bottom:0", "-bottom:0"]}]}), encoding="utf-8")
    assert load_loop(path).segments == (ExplicitPath((("bottom:0", 1), ("bottom:0", -1))),)
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    with pytest.raises(LoopSpecError):
        load_loop(bad)
