"""Smell detectors grouped by pipeline stage."""

from kjlint.detectors.config import DetectorConfig
from kjlint.detectors.cycles import detect_circular_references, tarjan_scc
from kjlint.detectors.findings import DEFAULT_SEVERITY, Finding, Related, Severity, Smell
from kjlint.detectors.interop import (
    detect_immutable_collection_mutation,
    detect_internal_exposure,
    detect_kotlin_jvm_annotation_in_java,
    detect_platform_type,
)
from kjlint.detectors.monolingual import (
    detect_excessive_params,
    detect_implicit_single_expr,
    detect_unused_imports,
)

__all__ = [
    "DEFAULT_SEVERITY", "DetectorConfig", "Finding", "Related", "Severity", "Smell",
    "detect_circular_references", "detect_excessive_params", "detect_immutable_collection_mutation",
    "detect_implicit_single_expr", "detect_internal_exposure", "detect_kotlin_jvm_annotation_in_java",
    "detect_platform_type", "detect_unused_imports", "tarjan_scc",
]
