"""Detector settings and their defaults."""

from __future__ import annotations

from dataclasses import dataclass, field

from kjlint.detectors.findings import DEFAULT_SEVERITY, Severity, Smell
from kjlint.entities import DEFAULT_NOTNULL, DEFAULT_NULLABLE

READONLY_COLLECTIONS = frozenset(f"kotlin.collections.{n}" for n in ("List", "Set", "Map", "Collection"))
MUTATOR_METHODS = frozenset("""
    add addAll remove removeAll removeIf retainAll clear set sort replaceAll put putAll merge
    compute computeIfAbsent computeIfPresent
""".split())
KOTLIN_JVM_ANNOTATIONS = frozenset("""
    JvmStatic JvmField JvmName JvmOverloads JvmDefault JvmSuppressWildcards JvmWildcard
    JvmMultifileClass
""".split())

# Name sets each detector needs; an enabled detector must not see an empty one.
_REQUIRED_SETS = {
    Smell.PLATFORM_TYPE: ("nullable_annotations", "notnull_annotations"),
    Smell.IMMUTABLE_COLLECTION_MUTATION: ("readonly_collection_types", "mutator_methods"),
    Smell.KOTLIN_JVM_ANNOTATION_IN_JAVA: ("kotlin_jvm_annotations",),
}


@dataclass(frozen=True)
class DetectorConfig:
    max_params: int = 6
    nullable_annotations: frozenset[str] = DEFAULT_NULLABLE
    notnull_annotations: frozenset[str] = DEFAULT_NOTNULL
    readonly_collection_types: frozenset[str] = READONLY_COLLECTIONS
    mutator_methods: frozenset[str] = MUTATOR_METHODS
    kotlin_jvm_annotations: frozenset[str] = KOTLIN_JVM_ANNOTATIONS
    enabled: dict[Smell, bool] = field(default_factory=dict)
    severity_overrides: dict[Smell, Severity] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if isinstance(self.max_params, bool) or not isinstance(self.max_params, int) or self.max_params < 1:
            raise ValueError(f"max_params must be an integer >= 1, got {self.max_params!r}")
        for smell, names in _REQUIRED_SETS.items():
            if not self.is_enabled(smell):
                continue
            for name in names:
                if not getattr(self, name):
                    raise ValueError(f"{name} must not be empty while {smell.value} is enabled")

    def is_enabled(self, smell: Smell) -> bool:
        return self.enabled.get(smell, True)

    def severity(self, smell: Smell) -> Severity:
        return self.severity_overrides.get(smell, DEFAULT_SEVERITY[smell])
