"""Deterministic JSON output and validation against the shipped schemas."""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator

from core import config

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "schemas"


def dumps(payload: Any) -> str:
    """Serialize with sorted keys and the configured indent so output is byte-stable."""
    return json.dumps(payload, indent=config.JSON_INDENT, sort_keys=True, ensure_ascii=False) + "\n"


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    path = SCHEMA_DIR / f"{name}.schema.json"
    with path.open("r", encoding="utf-8") as handle:
        return json.load(handle)


def validate(payload: Any, schema_name: str) -> None:
    """Raise ``jsonschema.ValidationError`` when ``payload`` does not match the named schema."""
    Draft202012Validator(load_schema(schema_name)).validate(payload)
