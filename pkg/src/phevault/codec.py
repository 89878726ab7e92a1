"""Canonical text encoding shared by key files, ciphertexts and the wire.

Integers are lowercase hex without leading zeros (``"0"`` for zero). Documents
are single-line JSON objects with no insignificant whitespace; field order is
the insertion order chosen by the builders in :mod:`phevault.documents`, so a
given value always serializes to the same bytes.
"""

from __future__ import annotations

import json
import re

_HEX = re.compile(r"(?:0|[1-9a-f][0-9a-f]*)\Z")


def to_hex(x: int) -> str:
    if x < 0:
        raise ValueError("only nonnegative integers are encodable")
    return format(x, "x")


def from_hex(s) -> int:
    """Parse a canonical hex integer; anything else raises ValueError."""
    if not isinstance(s, str) or not _HEX.match(s):
        raise ValueError(f"not a canonical hex integer: {s!r}")
    return int(s, 16)


def dumps(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True, allow_nan=False)


def loads(text: str | bytes) -> dict:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("document must be a JSON object")
    return doc
