"""Argument parsing, logging setup and dispatch for the ``endtrace`` command line."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from core import config
from core.errors import EndTraceError, PairingCapExceeded
from cli.commands import COMMANDS, CommandOutput
from utils import json_io

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_CAP_EXCEEDED = 3

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


def configure_logging(verbose: bool) -> None:
    """Send log records to stderr so stdout carries only the requested output."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_endtrace", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._endtrace = True
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose or config.DEBUG_LOGGING else logging.INFO)


def _add_family_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", default="ladder", help="built-in family: ladder, line, tree (default: ladder)")
    parser.add_argument("--param", action="append", metavar="KEY=VALUE", help="family parameter, repeatable")
    parser.add_argument("--family-json", metavar="PATH", help="table-driven family file (overrides --family)")


def _add_loop_options(parser: argparse.ArgumentParser, default: str = "trivial") -> None:
    parser.add_argument("--loop", default=default, help=f"built-in loop name (default: {default})")
    parser.add_argument("--loop-json", metavar="PATH", help="loop file (overrides --loop)")


def _add_format(parser: argparse.ArgumentParser, choices: tuple[str, ...] = ("json", "text")) -> None:
    parser.add_argument("--format", choices=choices, default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="endtrace",
        description="Quotients of locally finite graphs, loop words in free groups and commutator length.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress at DEBUG level on stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("truncate", help="build the quotient graph at a level")
    _add_family_options(p)
    p.add_argument("--level", type=int, required=True)
    _add_format(p, ("json", "text", "dot"))

    p = sub.add_parser("ends", help="count complement components per level")
    _add_family_options(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True, help="radius deciding finiteness at --level (clipped to the depth of a table family)")
    p.add_argument("--to", type=int, help="last level of a range; the horizon keeps its offset")
    _add_format(p)

    p = sub.add_parser("trace", help="word of a loop at one level")
    _add_family_options(p)
    _add_loop_options(p)
    p.add_argument("--level", type=int, required=True)
    _add_format(p)

    p = sub.add_parser("psi", help="coherent family of a loop and its coherence report")
    _add_family_options(p)
    _add_loop_options(p)
    p.add_argument("--max", type=int, required=True)
    _add_format(p)

    p = sub.add_parser("commlength", help="commutator length of a word")
    p.add_argument("--word", required=True, help='signed generator indices, e.g. "1 2 -1 -2" or "[1,2,-1,-2]"')
    p.add_argument("--rank", type=int, help="alphabet rank (default: largest index used)")
    p.add_argument("--jobs", type=int, default=None, help="joblib workers (default: PAIRING_N_JOBS)")
    _add_format(p)

    p = sub.add_parser("ladder-table", help="det, GF(2) rank and cl for the ladder matrices")
    p.add_argument("--min", type=int, default=1)
    p.add_argument("--max", type=int, default=config.LADDER_TABLE_MAX)
    _add_format(p)

    p = sub.add_parser("homology-report", help="cl and cycle-space verdicts of a loop per level")
    p.add_argument("loop_name", nargs="?", help="built-in loop name (same as --loop)")
    _add_family_options(p)
    _add_loop_options(p, default="figure4")
    p.add_argument("--max", type=int, default=8)
    _add_format(p)

    p = sub.add_parser("rank-profile", help="rank of the fundamental group per level")
    _add_family_options(p)
    p.add_argument("--max", type=int, required=True)
    _add_format(p)

    p = sub.add_parser("multiplicity", help="occurrence counts of persistent chords in a loop's family")
    _add_family_options(p)
    _add_loop_options(p)
    p.add_argument("--max", type=int, required=True)
    _add_format(p)

    return parser


def render(output: CommandOutput, fmt: str) -> str:
    if fmt == "text":
        return output.text + "\n"
    if fmt == "dot" and output.dot is not None:
        return output.dot
    json_io.validate(output.payload, output.schema)
    return json_io.dumps(output.payload)


def _error_output(exc: Exception) -> str:
    payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    json_io.validate(payload, "error")
    return json_io.dumps(payload)


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Parse ``argv``, execute one subcommand and return (exit status, stdout text).

    Usage errors leave through argparse's ``SystemExit`` with status 2.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    handler = COMMANDS[args.command]
    try:
        output = handler(args)
    except PairingCapExceeded as exc:
        logging.getLogger(__name__).warning("%s", exc)
        return EXIT_CAP_EXCEEDED, _error_output(exc)
    except EndTraceError as exc:
        logging.getLogger(__name__).error("%s", exc)
        return EXIT_DOMAIN_ERROR, _error_output(exc)
    return EXIT_OK, render(output, args.format)


def main(argv: Sequence[str] | None = None) -> int:
    status, text = run(argv)
    sys.stdout.write(text)
    return status
