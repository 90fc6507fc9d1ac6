"""One handler per subcommand. Handlers return a :class:`CommandOutput`; printing is left to the caller."""

from __future__ import annotations

import argparse
import json
import logging
import re
from dataclasses import dataclass
from typing import Any, Callable

from core import config
from core.errors import AlphabetMismatchError, FamilyParameterError, LevelError
from core.freegroup import Word, trace_word
from core.graph_model import GraphFamily, build_family, complement_components, ends_profile
from core.homology import commutator_length, ladder_table, nonnullhomologous_report
from core.invlimit import check_coherence, letter_multiplicity, level_tree, psi_family
from core.loops import LoopSpec, builtin_loop, load_loop
from core.truncation import rank_profile, theta_trace, truncate
from utils.dot_exporter import to_dot

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandOutput:
    schema: str
    payload: dict[str, Any]
    text: str
    dot: str | None = None


def _parse_param_value(raw: str) -> int | str:
    try:
        return int(raw)
    except ValueError:
        return raw


def parse_params(items: list[str] | None) -> dict[str, int | str]:
    params: dict[str, int | str] = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise FamilyParameterError(f"Family parameters are given as key=value, got '{item}'.")
        params[key.strip()] = _parse_param_value(value.strip())
    return params


def resolve_family(args: argparse.Namespace) -> GraphFamily:
    if getattr(args, "family_json", None):
        return build_family("table", {"path": args.family_json})
    return build_family(args.family, parse_params(args.param))


def resolve_loop(args: argparse.Namespace, family: GraphFamily) -> LoopSpec:
    if getattr(args, "loop_json", None):
        return load_loop(args.loop_json)
    return builtin_loop(family, args.loop)


def check_level(value: int, label: str, minimum: int = 1) -> int:
    if not minimum <= value <= config.MAX_LEVEL:
        raise LevelError(f"{label} must lie in [{minimum}, {config.MAX_LEVEL}], got {value}.")
    return value


def _progress(args: argparse.Namespace) -> Callable[[str], None]:
    return logger.info if getattr(args, "verbose", False) else logger.debug


def cmd_truncate(args: argparse.Namespace) -> CommandOutput:
    family = resolve_family(args)
    n = check_level(args.level, "--level")
    quotient = truncate(family, n)
    graph = quotient.graph
    payload = {
        "family": family.name,
        "level": n,
        "basepoint": graph.basepoint,
        "vertices": list(graph.vertices),
        "collapsed": [quotient.collapsed[i] for i in sorted(quotient.collapsed)],
        "edges": [[edge.id, edge.a, edge.b] for edge in graph.edges],
        "betti": quotient.betti_number(),
    }
    text = (
        f"level {n}: {len(graph.vertices)} vertices, {len(graph.edges)} edges, "
        f"{len(quotient.collapsed)} collapsed, betti {payload['betti']}"
    )
    return CommandOutput("truncate", payload, text, dot=to_dot(quotient, f"{family.name}_{n}"))


def cmd_ends(args: argparse.Namespace) -> CommandOutput:
    family = resolve_family(args)
    lo = check_level(args.level, "--level", minimum=0)
    hi = check_level(args.to if args.to is not None else lo, "--to", minimum=lo)
    offset = args.horizon - lo
    limit = family.generator.max_radius()
    rows = []
    for n, infinite, finite in ends_profile(family, range(lo, hi + 1), offset):
        horizon = n + offset if limit is None else min(n + offset, limit)
        row: dict[str, Any] = {"level": n, "horizon": horizon, "infinite": infinite, "finite": finite}
        if lo == hi:
            row["components"] = [
                {"id": c.id, "frontier": list(c.frontier), "finiteness": c.finiteness}
                for c in complement_components(family, n, n + offset)
            ]
        rows.append(row)
    if lo == hi:
        text = str(rows[0]["infinite"])
    else:
        text = "\n".join(f"{row['level']}\t{row['infinite']}\t{row['finite']}" for row in rows)
    return CommandOutput("ends", {"family": family.name, "rows": rows}, text)


def cmd_trace(args: argparse.Namespace) -> CommandOutput:
    family = resolve_family(args)
    loop = resolve_loop(args, family)
    n = check_level(args.level, "--level")
    path = theta_trace(loop, family, n)
    tree = level_tree(family, n)
    word = trace_word(path, tree)
    payload = {
        "family": family.name,
        "loop": loop.name,
        "level": n,
        "path": path.signed_ids(),
        "chords": list(tree.chords),
        "rank": tree.rank,
        "word": list(word.letters),
    }
    return CommandOutput("trace", payload, str(word))


def cmd_psi(args: argparse.Namespace) -> CommandOutput:
    family = resolve_family(args)
    loop = resolve_loop(args, family)
    top = check_level(args.max, "--max")
    fam = psi_family(loop, family, top, logger_func=_progress(args))
    report = check_coherence(fam)
    payload = {
        "family": family.name,
        "loop": loop.name,
        "levels": [{"level": n, "rank": w.rank, "word": list(w.letters)} for n, w in sorted(fam.levels.items())],
        "coherence": report.to_dict(),
    }
    lines = [f"{n}\t{w}" for n, w in sorted(fam.levels.items())]
    lines.append("coherent" if report.passed else f"incoherent at {report.failing_pair}")
    return CommandOutput("psi", payload, "\n".join(lines))


def parse_word(raw: str, rank: int | None) -> Word:
    raw = raw.strip()
    try:
        if raw.startswith("["):
            letters = json.loads(raw)
        else:
            letters = [int(token) for token in re.split(r"[\s,]+", raw) if token]
    except (json.JSONDecodeError, ValueError) as exc:
        raise AlphabetMismatchError(f"Cannot read word '{raw}': {exc}") from exc
    if not isinstance(letters, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in letters):
        raise AlphabetMismatchError(f"A word is a list of nonzero integers, got '{raw}'.")
    if rank is None:
        rank = max((abs(x) for x in letters), default=0)
    return Word(rank, tuple(letters))


def cmd_commlength(args: argparse.Namespace) -> CommandOutput:
    word = parse_word(args.word, args.rank)
    result = commutator_length(word, n_jobs=args.jobs, logger_func=_progress(args))
    text = "not in the commutator subgroup" if result.cl is None else str(result.cl)
    return CommandOutput("commlength", result.to_dict(), text)


def cmd_ladder_table(args: argparse.Namespace) -> CommandOutput:
    lo = check_level(args.min, "--min")
    hi = check_level(args.max, "--max", minimum=lo)
    rows = ladder_table(lo, hi)
    text = "\n".join(["n\tdet\trank\tcl", *(f"{r.n}\t{r.det}\t{r.rank}\t{r.cl}" for r in rows)])
    return CommandOutput("ladder_table", {"rows": [row.to_dict() for row in rows]}, text)


def cmd_homology_report(args: argparse.Namespace) -> CommandOutput:
    family = resolve_family(args)
    if args.loop_name:
        args.loop = args.loop_name
    loop = resolve_loop(args, family)
    top = check_level(args.max, "--max")
    report = nonnullhomologous_report(loop, family, top, logger_func=_progress(args))
    lines = ["level\tcl\tZ\tZ2"]
    for row in report.rows:
        cl = "-" if row.cl is None else str(row.cl)
        lines.append(f"{row.level}\t{cl}\t{'yes' if row.z_trivial else 'no'}\t{'yes' if row.z2_trivial else 'no'}")
    lines.append(f"non-nullhomologous evidence: {'yes' if report.evidence else 'no'}")
    return CommandOutput("homology_report", report.to_dict(), "\n".join(lines))


def cmd_rank_profile(args: argparse.Namespace) -> CommandOutput:
    family = resolve_family(args)
    top = check_level(args.max, "--max")
    rows = rank_profile(family, range(1, top + 1), logger_func=_progress(args))
    payload = {"family": family.name, "rows": [{"level": n, "rank": rank} for n, rank in rows]}
    return CommandOutput("rank_profile", payload, "\n".join(f"{n}\t{rank}" for n, rank in rows))


def cmd_multiplicity(args: argparse.Namespace) -> CommandOutput:
    family = resolve_family(args)
    loop = resolve_loop(args, family)
    top = check_level(args.max, "--max")
    fam = psi_family(loop, family, top, logger_func=_progress(args))
    rows = letter_multiplicity(fam)
    payload = {"family": family.name, "loop": loop.name, "max_level": top, "chords": [row.to_dict() for row in rows]}
    text = "\n".join(f"{row.edge_id}\t{row.first_level}\t{' '.join(map(str, row.counts))}" for row in rows)
    return CommandOutput("multiplicity", payload, text)


COMMANDS: dict[str, Callable[[argparse.Namespace], CommandOutput]] = {
    "truncate": cmd_truncate,
    "ends": cmd_ends,
    "trace": cmd_trace,
    "psi": cmd_psi,
    "commlength": cmd_commlength,
    "ladder-table": cmd_ladder_table,
    "homology-report": cmd_homology_report,
    "rank-profile": cmd_rank_profile,
    "multiplicity": cmd_multiplicity,
}
