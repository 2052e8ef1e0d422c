"""Finding records and the smell catalog."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from kjlint.source import SourceRange


class Smell(str, Enum):
    UNUSED_IMPORT = "UnusedImport"
    EXCESSIVE_PARAMS = "ExcessiveParams"
    IMPLICIT_SINGLE_EXPR = "ImplicitSingleExprFunction"
    CIRCULAR_REFERENCES = "CircularReferences"
    PLATFORM_TYPE = "PlatformType"
    IMMUTABLE_COLLECTION_MUTATION = "ImmutableCollectionMutation"
    INTERNAL_EXPOSURE = "InternalExposure"
    KOTLIN_JVM_ANNOTATION_IN_JAVA = "KotlinJvmAnnotationInJava"


class Severity(str, Enum):
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"

    @property
    def rank(self) -> int:
        return ("info", "warning", "error").index(self.value)


DEFAULT_SEVERITY = {
    Smell.UNUSED_IMPORT: Severity.INFO,
    Smell.EXCESSIVE_PARAMS: Severity.INFO,
    Smell.IMPLICIT_SINGLE_EXPR: Severity.INFO,
    Smell.CIRCULAR_REFERENCES: Severity.INFO,
    Smell.PLATFORM_TYPE: Severity.WARNING,
    Smell.IMMUTABLE_COLLECTION_MUTATION: Severity.WARNING,
    Smell.INTERNAL_EXPOSURE: Severity.WARNING,
    Smell.KOTLIN_JVM_ANNOTATION_IN_JAVA: Severity.ERROR,
}


@dataclass(frozen=True)
class Related:
    file: str
    range: SourceRange
    note: str

    def to_json(self) -> dict:
        return {"file": self.file, "line": self.range.line, "col": self.range.col, "note": self.note}


@dataclass(frozen=True)
class Finding:
    smell: Smell
    severity: Severity
    file: str
    range: SourceRange
    message: str
    entities: tuple[str, ...] = ()
    related: tuple[Related, ...] = ()

    def sort_key(self) -> tuple:
        return (self.file, self.range.line, self.range.col, self.smell.value, self.message)

    @property
    def files(self) -> set[str]:
        """The finding's own file plus every related file."""
        return {self.file, *(r.file for r in self.related)}

    def to_json(self) -> dict:
        return {
            "smell": self.smell.value,
            "severity": self.severity.value,
            "file": self.file,
            "line": self.range.line,
            "col": self.range.col,
            "endLine": self.range.end_line,
            "endCol": self.range.end_col,
            "message": self.message,
            "entities": list(self.entities),
            "related": [r.to_json() for r in self.related],
        }
