"""Loop descriptions in the end compactification, and the built-in named loops.

A :class:`LoopSpec` is a finite list of segments. Explicit segments walk
original edges; ray segments walk a named parametric edge family of the graph
out to an end (:class:`RayOut`) or back in from it (:class:`RayBack`). Two ray
segments meet "at infinity" and must head into the same end.

Loop JSON::

    {"name": "my-loop",
     "segments": [{"kind": "ray_out", "ray": "bottom", "start": 0},
                  {"kind": "ray_back", "ray": "top", "start": 0},
                  {"kind": "path", "edges": ["-rung:0"]}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Union

from core.errors import LoopSpecError
from core.graph_model import GraphFamily, parse_signed_edge


@dataclass(frozen=True)
class ExplicitPath:
    steps: tuple[tuple[str, int], ...] = ()

    def inverse(self) -> "ExplicitPath":
        return ExplicitPath(tuple((edge_id, -sign) for edge_id, sign in reversed(self.steps)))


@dataclass(frozen=True)
class RayOut:
    ray: str
    start: int = 0

    def inverse(self) -> "RayBack":
        return RayBack(self.ray, self.start)


@dataclass(frozen=True)
class RayBack:
    ray: str
    start: int = 0

    def inverse(self) -> RayOut:
        return RayOut(self.ray, self.start)


Segment = Union[ExplicitPath, RayOut, RayBack]


@dataclass(frozen=True)
class LoopSpec:
    name: str
    segments: tuple[Segment, ...] = ()

    def __add__(self, other: "LoopSpec") -> "LoopSpec":
        return LoopSpec(f"{self.name}*{other.name}", self.segments + other.segments)

    def inverse(self) -> "LoopSpec":
        return LoopSpec(f"{self.name}^-1", tuple(segment.inverse() for segment in reversed(self.segments)))

    def power(self, k: int) -> "LoopSpec":
        if k < 0:
            return self.inverse().power(-k)
        return LoopSpec(f"{self.name}^{k}", self.segments * k)


def _path(*tokens: str) -> ExplicitPath:
    return ExplicitPath(tuple(parse_signed_edge(token) for token in tokens))


TRIVIAL = LoopSpec("trivial", ())

# Ladder loops. The figure4 loop runs out along the bottom, back along the top,
# out again looping once clockwise around every square, back along the top, and
# finally down the first rung.
LADDER_LOOPS: dict[str, LoopSpec] = {
    "trivial": TRIVIAL,
    "square": LoopSpec("square", (_path("+bottom:0", "+rung:1", "-top:0", "-rung:0"),)),
    "roundtrip": LoopSpec("roundtrip", (RayOut("bottom"), RayBack("top"), _path("-rung:0"))),
    "backtrack": LoopSpec("backtrack", (RayOut("bottom"), RayBack("bottom"))),
    "figure4": LoopSpec(
        "figure4",
        (RayOut("bottom"), RayBack("top"), RayOut("squares"), RayBack("top"), _path("-rung:0")),
    ),
}

LINE_LOOPS: dict[str, LoopSpec] = {
    "trivial": TRIVIAL,
    "backtrack": LoopSpec("backtrack", (RayOut("right"), RayBack("right"))),
    "step": LoopSpec("step", (_path("+e:0", "-e:0"),)),
}

TREE_LOOPS: dict[str, LoopSpec] = {
    "trivial": TRIVIAL,
    "backtrack": LoopSpec("backtrack", (RayOut("leftmost"), RayBack("leftmost"))),
}

BUILTIN_LOOPS: dict[str, dict[str, LoopSpec]] = {
    "ladder": LADDER_LOOPS,
    "line": LINE_LOOPS,
    "tree": TREE_LOOPS,
}


def builtin_loop(family: GraphFamily | str, name: str) -> LoopSpec:
    family_name = family if isinstance(family, str) else family.name
    loops = BUILTIN_LOOPS.get(family_name, {"trivial": TRIVIAL})
    if name not in loops:
        known = ", ".join(sorted(loops))
        raise LoopSpecError(f"Unknown loop '{name}' for family '{family_name}'. Known loops: {known}.")
    return loops[name]


def _parse_segment(raw: Any, position: int) -> Segment:
    if not isinstance(raw, dict):
        raise LoopSpecError(f"Segment {position}: object expected, got {raw!r}.")
    kind = raw.get("kind")
    if kind == "path":
        edges = raw.get("edges", [])
        if not isinstance(edges, list) or not all(isinstance(token, str) for token in edges):
            raise LoopSpecError(f"Segment {position}: 'edges' must be a list of signed edge ids.")
        return _path(*edges)
    if kind in ("ray_out", "ray_back"):
        ray = raw.get("ray")
        start = raw.get("start", 0)
        if not isinstance(ray, str) or not isinstance(start, int) or isinstance(start, bool) or start < 0:
            raise LoopSpecError(f"Segment {position}: ray segments need a 'ray' name and a non-negative 'start'.")
        return RayOut(ray, start) if kind == "ray_out" else RayBack(ray, start)
    raise LoopSpecError(f"Segment {position}: unknown kind {kind!r} (expected path, ray_out or ray_back).")


def parse_loop(payload: Any) -> LoopSpec:
    if not isinstance(payload, dict) or not isinstance(payload.get("segments"), list):
        raise LoopSpecError("Loop JSON: object with a 'segments' list expected.")
    segments = tuple(_parse_segment(raw, i) for i, raw in enumerate(payload["segments"]))
    return LoopSpec(str(payload.get("name", "loop")), segments)


def load_loop(path: str | Path) -> LoopSpec:
    path = Path(path)
    if not path.is_file():
        raise LoopSpecError(f"Loop file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LoopSpecError(f"Malformed JSON in '{path}': {exc}") from exc
    return parse_loop(payload)
