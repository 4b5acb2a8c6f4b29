"""Centralised JSON helpers — thin wrappers around *orjson*.

Every module that needs JSON serialisation (log lines, ``--format obj``
reports, error payloads) imports from here rather than from ``json`` or
``orjson`` directly.  numpy scalars and arrays are serialised natively
through ``OPT_SERIALIZE_NUMPY``, so result records can carry raw
``float64`` values.
"""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

import orjson

_OPTIONS = orjson.OPT_SERIALIZE_NUMPY


def dumps(obj: object, *, default: Callable[[Any], Any] | None = None) -> str:
    """Serialize *obj* to a single-line JSON string."""
    return orjson.dumps(obj, default=default, option=_OPTIONS).decode()


def dumps_pretty(obj: object) -> str:
    """Serialize *obj* with 2-space indentation (for ``--format obj`` reports)."""
    return orjson.dumps(obj, option=_OPTIONS | orjson.OPT_INDENT_2).decode()


def loads(data: str | bytes) -> Any:
    """Deserialize a JSON string or bytes."""
    return orjson.loads(data)
