"""Shared helpers for dealing with JSON and YAML payloads."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import orjson
import yaml

__all__ = [
    "JsonValidationError",
    "YamlValidationError",
    "dump_json",
    "parse_json",
    "parse_scalar",
    "parse_yaml",
    "write_json",
]

_DUMP_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_APPEND_NEWLINE


class JsonValidationError(ValueError):
    """Raised when JSON parsing fails."""


class YamlValidationError(ValueError):
    """Raised when YAML parsing fails."""


def parse_json(value: str | bytes) -> Any:
    """Parse ``value`` as JSON and raise :class:`JsonValidationError` on failure."""

    try:
        return orjson.loads(value)
    except orjson.JSONDecodeError as exc:
        raise JsonValidationError(str(exc)) from exc


def parse_yaml(value: str) -> Any:
    """Parse ``value`` as YAML using :func:`yaml.safe_load`."""

    try:
        return yaml.safe_load(value)
    except yaml.YAMLError as exc:
        raise YamlValidationError(str(exc)) from exc


def parse_scalar(value: str) -> Any:
    """Interpret a command-line value the way YAML reads a flow scalar or list.

    ``"10"`` becomes ``10``, ``"[2, 3]"`` a list and ``"lz78"`` stays a string.
    """

    try:
        return yaml.safe_load(value)
    except yaml.YAMLError:
        return value


def dump_json(value: Any) -> bytes:
    """Indented JSON; mapping order is preserved so output diffs cleanly."""

    return orjson.dumps(value, option=_DUMP_OPTIONS)


def write_json(path: str | Path, value: Any) -> Path:
    """Write :func:`dump_json` output to ``path``."""

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(dump_json(value))
    return target
