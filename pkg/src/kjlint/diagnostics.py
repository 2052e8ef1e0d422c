"""Non-fatal notes produced while indexing, extracting or running the pipeline."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Diagnostic:
    path: str
    line: int
    code: str  # DuplicateSymbol, OverloadCollapsed, UnmappedEdge, ...
    message: str
    level: str = "info"

    def to_json(self) -> dict:
        return {"path": self.path, "line": self.line, "code": self.code,
                "message": self.message, "level": self.level}
