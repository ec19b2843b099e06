"""Canonical JSON encoding.

Reports and graph files must serialize to identical bytes whenever their
content is identical, so every JSON artifact in this package goes through
one encoder with one fixed formatting policy: sorted keys, two-space
indent, a trailing newline, and floats rendered by Python's shortest
round-trip repr.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

__all__ = ["canonical_bytes", "canonical_str", "plain"]


def plain(value: Any) -> Any:
    """Recursively convert values into JSON-encodable builtins.

    Fractions become floats at this boundary; exact arithmetic stays
    internal to the library.
    """
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    raise TypeError(f"cannot serialize {type(value).__name__} canonically")


def canonical_str(obj: Any) -> str:
    return json.dumps(plain(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def canonical_bytes(obj: Any) -> bytes:
    return canonical_str(obj).encode("ascii")
