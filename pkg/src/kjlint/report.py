"""Rendering an AnalysisResult as canonical JSON or plain text."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from kjlint import __version__, canonical
from kjlint.dependencies import export_graph_json
from kjlint.detectors.findings import Finding, Severity, Smell
from kjlint.pipeline import AnalysisResult

SCHEMA_VERSION = 1
TOOL_NAME = "kjlint"
FORMATS = ("text", "json")


class ReportError(Exception):
    """A report file could not be written."""


@dataclass
class ReportDocument:
    languages: list[str]
    findings: list[dict]
    stats: dict
    skipped_files: list[dict] = field(default_factory=list)
    tool: dict = field(default_factory=lambda: {"name": TOOL_NAME, "version": __version__})
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_result(cls, result: AnalysisResult) -> ReportDocument:
        findings = sorted(result.findings, key=Finding.sort_key)
        return cls(
            languages=[lang.value for lang in result.languages],
            findings=[f.to_json() for f in findings],
            stats={
                "perSmell": {s.value: n for s, n in result.per_smell.items()},
                "filesAffected": {s.value: n for s, n in result.files_affected.items()},
                "totalFindings": len(findings),
                "filesAnalyzed": result.files_analyzed,
                "graph": dict(result.graph_summary),
            },
            skipped_files=[{"path": p, "reason": r} for p, r in sorted(result.skipped_files)],
        )

    def to_json(self) -> dict:
        return {
            "schemaVersion": self.schema_version,
            "tool": self.tool,
            "languages": self.languages,
            "findings": self.findings,
            "stats": self.stats,
            "skippedFiles": self.skipped_files,
        }

    @classmethod
    def from_json(cls, obj: dict) -> ReportDocument:
        return cls(obj["languages"], obj["findings"], obj["stats"], obj["skippedFiles"],
                   obj["tool"], obj["schemaVersion"])

    def dumps(self) -> bytes:
        return canonical.dumps(self.to_json())

    @classmethod
    def loads(cls, data: bytes | str) -> ReportDocument:
        return cls.from_json(json.loads(data))


def format_text(result: AnalysisResult) -> str:
    lines = []
    for f in sorted(result.findings, key=Finding.sort_key):
        lines.append(f"{f.severity.value} {f.smell.value} {f.file}:{f.range.line}:{f.range.col} {f.message}")
    for path, reason in sorted(result.skipped_files):
        lines.append(f"skipped {path}: {reason}")
    if lines:
        lines.append("")
    for smell in Smell:
        if smell in result.per_smell:
            lines.append(f"{smell.value} Detected={result.per_smell[smell]} "
                         f"FilesAffected={result.files_affected[smell]}")
    lines.append(f"Total Detected={len(result.findings)} FilesAnalyzed={result.files_analyzed}")
    return "\n".join(lines) + "\n"


def exit_status(result: AnalysisResult) -> int:
    """1 when any finding is at error severity, else 0."""
    return int(any(f.severity is Severity.ERROR for f in result.findings))


def _write(path: Path, data: bytes) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    except OSError as exc:
        raise ReportError(f"{path}: {exc.strerror or exc}") from exc
    return path


def render_report(result: AnalysisResult, fmt: str = "text", prefix: str = "",
                  out_dir: str | Path | None = None, stream: TextIO | None = None) -> list[Path]:
    """Write the report (and, with an output directory, the graph export).

    Without ``out_dir`` the report goes to ``stream`` (standard output by
    default) and nothing is written to disk. Returns the written paths.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    prefix = prefix or ""
    body = ReportDocument.from_result(result).dumps() if fmt == "json" else format_text(result).encode("utf-8")
    if out_dir is None:
        out = stream or sys.stdout
        out.write(body.decode("utf-8"))
        out.flush()
        return []
    out_dir = Path(out_dir)
    return [
        _write(out_dir / f"{prefix}report.{'json' if fmt == 'json' else 'txt'}", body),
        _write(out_dir / f"{prefix}graph.json", export_graph_json(result.graph)),
    ]
