"""Canonical JSON encoding shared by the report and the graph export."""

from __future__ import annotations

import json
from typing import Any


def dumps(obj: Any) -> bytes:
    """Sorted keys, compact separators, UTF-8, trailing newline: byte-stable across runs."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return (text + "\n").encode("utf-8")
