"""Canonical JSON emission: sorted keys, floats fixed at six decimals.

The standard encoder prints floats with ``repr`` which makes snapshots noisy
under arithmetic drift; every file this package writes goes through
:func:`dumps` instead so fixtures stay diff-stable.
"""

from __future__ import annotations

import json
import math
from typing import Any

FLOAT_DECIMALS = 6


def format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"non-finite number {value!r} cannot be serialized")
    text = f"{value:.{FLOAT_DECIMALS}f}"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text


def round_float(value: float) -> float:
    """Value as it will read back after a canonical dump."""
    return float(format_float(value))


def _encode(obj: Any, indent: int | None, level: int) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            (json.dumps(str(k), ensure_ascii=False), _encode(obj[k], indent, level + 1))
            for k in sorted(obj, key=str)
        ]
        if indent is None:
            return "{" + ", ".join(f"{k}: {v}" for k, v in items) + "}"
        pad = " " * (indent * (level + 1))
        body = ",\n".join(f"{pad}{k}: {v}" for k, v in items)
        return "{\n" + body + "\n" + " " * (indent * level) + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [_encode(v, indent, level + 1) for v in obj]
        if indent is None:
            return "[" + ", ".join(parts) + "]"
        pad = " " * (indent * (level + 1))
        return "[\n" + ",\n".join(pad + p for p in parts) + "\n" + " " * (indent * level) + "]"
    raise TypeError(f"object of type {type(obj).__name__} is not JSON serializable")


def dumps(obj: Any, indent: int | None = 2) -> str:
    return _encode(obj, indent, 0)


def dump_file(obj: Any, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
        fh.write("\n")


def load_file(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
