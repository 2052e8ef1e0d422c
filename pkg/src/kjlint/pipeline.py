"""Three-stage analysis driver, processor registry and the staged context store.

Stage 1 parses every file, runs the single-file detectors and leaves
cross-language hints in the context. Stage 2 builds the symbol index and the
dependency graph and looks for cycles. Stage 3 runs the cross-language
detectors, and only when at least two languages were requested.

Adding a processor: write a :class:`Processor` subclass that subscribes to the
message kinds it needs in :meth:`Processor.attach`, then add a
:class:`ProcessorDescriptor` for it to :data:`REGISTRY`.
"""

from __future__ import annotations

import logging
import os
import time
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from kjlint.bus import Message, MessageBus
from kjlint.dependencies import DependencyGraph, extract_dependencies
from kjlint.detectors import interop
from kjlint.detectors.config import DetectorConfig
from kjlint.detectors.cycles import detect_circular_references
from kjlint.detectors.findings import Finding, Smell
from kjlint.detectors.monolingual import (
    detect_excessive_params,
    detect_implicit_single_expr,
    detect_unused_imports,
)
from kjlint.diagnostics import Diagnostic
from kjlint.entities import SymbolIndex, build_symbol_index
from kjlint.source import Language, SourceError, SourceFile
from kjlint.syntax import ParsedUnit, ParseError, parse_unit

log = logging.getLogger(__name__)

# Message kinds carried by the bus.
SOURCE_PARSED = "source.parsed"
STAGE_COMPLETED = "stage.completed"
GRAPH_BUILT = "graph.built"
INTEROP_READY = "interop.ready"
FINDING = "finding"

HINT_PREFIX = "hints."
SKIPPED_DIRS = frozenset({"build", "out", "target"})

# How many times each processor class has been instantiated, by descriptor id.
construction_counts: Counter[str] = Counter()


class NoSourcesFound(Exception):
    """The project root holds no .kt/.java file of a requested language."""


class StageClosed(Exception):
    """A write targeted the namespace of a stage that has already completed."""


# ---------------------------------------------------------------- context

@dataclass
class AnalysisContext:
    languages: frozenset[Language]
    config: DetectorConfig
    store: dict[tuple[int, str], Any] = field(default_factory=dict)
    findings: list[Finding] = field(default_factory=list)
    graph: DependencyGraph | None = None
    index: SymbolIndex | None = None
    units: list[ParsedUnit] = field(default_factory=list)
    skipped_files: list[tuple[str, str]] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)
    closed_stages: set[int] = field(default_factory=set)
    trace: list[tuple[int, str]] = field(default_factory=list)  # (stage, processor id) as they ran

    def put(self, stage: int, key: str, value: Any) -> None:
        if stage in self.closed_stages:
            raise StageClosed(f"stage {stage} is complete; cannot write {key!r}")
        self.store[(stage, key)] = value

    def take(self, stage: int, key: str) -> Any | None:
        return self.store.pop((stage, key), None)

    def add_finding(self, finding: Finding) -> None:
        self.findings.append(finding)

    def close_stage(self, stage: int) -> None:
        self.closed_stages.add(stage)

    def clear_hints(self) -> None:
        for key in [k for k in self.store if k[0] == 1 and k[1].startswith(HINT_PREFIX)]:
            del self.store[key]


# ---------------------------------------------------------------- processors

class Processor:
    """Base class; construction is counted so tests can observe unloaded processors."""

    id = "processor"
    stage = 1

    def __init__(self, ctx: AnalysisContext, bus: MessageBus) -> None:
        construction_counts[self.id] += 1
        self.ctx = ctx
        self.bus = bus
        self.cfg = ctx.config

    def attach(self) -> None:
        raise NotImplementedError

    def emit(self, findings: Iterable[Finding]) -> None:
        for finding in findings:
            self.bus.publish(Message(FINDING, finding, frozenset({finding.smell.value}), self.id))

    def ran(self) -> None:
        self.ctx.trace.append((self.stage, self.id))


class _PerFile(Processor):
    """Stage-1 processor invoked once per parsed file of the given languages."""

    only: Language | None = None

    def attach(self) -> None:
        labels = {self.only.value} if self.only else None
        self.bus.subscribe(SOURCE_PARSED, self._on_parsed, label_filter=labels)

    def _on_parsed(self, msg: Message) -> None:
        self.ran()
        self.emit(self.check(msg.payload))

    def check(self, unit: ParsedUnit) -> list[Finding]:
        raise NotImplementedError


class UnusedImportProcessor(_PerFile):
    id = "unused-import"

    def check(self, unit: ParsedUnit) -> list[Finding]:
        return detect_unused_imports(unit.ast, unit.refs, self.cfg)


class ExcessiveParamsProcessor(_PerFile):
    id = "excessive-params"

    def check(self, unit: ParsedUnit) -> list[Finding]:
        return detect_excessive_params(unit.ast, self.cfg, unit.decls)


class ImplicitSingleExprProcessor(_PerFile):
    id = "implicit-single-expr"
    only = Language.KOTLIN

    def check(self, unit: ParsedUnit) -> list[Finding]:
        return detect_implicit_single_expr(unit.ast, self.cfg, unit.decls)


# Context keys written by the hint collector and read by the stage-3 detectors.
HINT_PLATFORM = "hints.platform"
HINT_MUTATORS = "hints.mutators"
HINT_JAVA_REFS = "hints.java-refs"
HINT_ANNOTATIONS = "hints.annotations"


class InteropHintsProcessor(Processor):
    """Collects stage-3 candidates while files stream past in stage 1."""

    id = "interop-hints"

    def attach(self) -> None:
        self._hints: dict[str, list[interop.Candidate]] = {
            HINT_PLATFORM: [], HINT_MUTATORS: [], HINT_JAVA_REFS: [], HINT_ANNOTATIONS: []}
        self.bus.subscribe(SOURCE_PARSED, self._on_parsed)
        self.bus.subscribe(STAGE_COMPLETED, self._flush, predicate=lambda m: m.payload == 1)

    def _on_parsed(self, msg: Message) -> None:
        self.ran()
        ast = [msg.payload.ast]
        self._hints[HINT_PLATFORM] += interop.platform_type_candidates(ast)
        self._hints[HINT_MUTATORS] += interop.mutator_call_candidates(ast, self.cfg)
        self._hints[HINT_JAVA_REFS] += interop.java_reference_candidates(ast)
        self._hints[HINT_ANNOTATIONS] += interop.java_annotation_candidates(ast)

    def _flush(self, msg: Message) -> None:
        for key, value in self._hints.items():
            self.ctx.put(1, key, value)


class CircularReferencesProcessor(Processor):
    id = "circular-references"
    stage = 2

    def attach(self) -> None:
        self.bus.subscribe(GRAPH_BUILT, self._on_graph)

    def _on_graph(self, msg: Message) -> None:
        self.ran()
        self.emit(detect_circular_references(msg.payload, self.cfg))


class _CrossLanguage(Processor):
    stage = 3
    hint = ""

    def attach(self) -> None:
        self.bus.subscribe(INTEROP_READY, self._on_ready)

    def _on_ready(self, msg: Message) -> None:
        self.ran()
        asts = [u.ast for u in self.ctx.units]
        self.emit(self.detect(self.ctx.index, asts, self.ctx.take(1, self.hint)))

    def detect(self, index: SymbolIndex, asts: list, candidates) -> list[Finding]:
        raise NotImplementedError


class PlatformTypeProcessor(_CrossLanguage):
    id = "platform-type"
    hint = HINT_PLATFORM

    def detect(self, index, asts, candidates):
        return interop.detect_platform_type(index, asts, self.cfg, candidates)


class ImmutableCollectionMutationProcessor(_CrossLanguage):
    id = "immutable-collection-mutation"
    hint = HINT_MUTATORS

    def detect(self, index, asts, candidates):
        return interop.detect_immutable_collection_mutation(index, asts, self.cfg, candidates)


class InternalExposureProcessor(_CrossLanguage):
    id = "internal-exposure"
    hint = HINT_JAVA_REFS

    def detect(self, index, asts, candidates):
        return interop.detect_internal_exposure(index, asts, self.cfg, candidates)


class KotlinJvmAnnotationProcessor(_CrossLanguage):
    id = "kotlin-jvm-annotation-in-java"
    hint = HINT_ANNOTATIONS

    def detect(self, index, asts, candidates):
        return interop.detect_kotlin_jvm_annotation_in_java(asts, self.cfg, candidates)


# ---------------------------------------------------------------- registry

@dataclass(frozen=True)
class ProcessorDescriptor:
    id: str
    stage: int
    languages: frozenset[Language]
    subscriptions: tuple[str, ...]
    produces: tuple[str, ...]
    factory: Callable[[AnalysisContext, MessageBus], Processor] = field(compare=False)
    smell: Smell | None = None

    def __post_init__(self) -> None:
        if self.stage not in (1, 2, 3):
            raise ValueError(f"{self.id}: stage must be 1, 2 or 3")
        if self.stage == 3 and len(self.languages) < 2:
            raise ValueError(f"{self.id}: stage-3 processors need at least two languages")


_BOTH = frozenset(Language)
_ANY: frozenset[Language] = frozenset()

REGISTRY: tuple[ProcessorDescriptor, ...] = (
    ProcessorDescriptor("unused-import", 1, _ANY, (SOURCE_PARSED,), (FINDING,),
                        UnusedImportProcessor, Smell.UNUSED_IMPORT),
    ProcessorDescriptor("excessive-params", 1, _ANY, (SOURCE_PARSED,), (FINDING,),
                        ExcessiveParamsProcessor, Smell.EXCESSIVE_PARAMS),
    ProcessorDescriptor("implicit-single-expr", 1, frozenset({Language.KOTLIN}), (SOURCE_PARSED,),
                        (FINDING,), ImplicitSingleExprProcessor, Smell.IMPLICIT_SINGLE_EXPR),
    ProcessorDescriptor("interop-hints", 1, _BOTH, (SOURCE_PARSED, STAGE_COMPLETED), (),
                        InteropHintsProcessor),
    ProcessorDescriptor("circular-references", 2, _ANY, (GRAPH_BUILT,), (FINDING,),
                        CircularReferencesProcessor, Smell.CIRCULAR_REFERENCES),
    ProcessorDescriptor("platform-type", 3, _BOTH, (INTEROP_READY,), (FINDING,),
                        PlatformTypeProcessor, Smell.PLATFORM_TYPE),
    ProcessorDescriptor("immutable-collection-mutation", 3, _BOTH, (INTEROP_READY,), (FINDING,),
                        ImmutableCollectionMutationProcessor, Smell.IMMUTABLE_COLLECTION_MUTATION),
    ProcessorDescriptor("internal-exposure", 3, _BOTH, (INTEROP_READY,), (FINDING,),
                        InternalExposureProcessor, Smell.INTERNAL_EXPOSURE),
    ProcessorDescriptor("kotlin-jvm-annotation-in-java", 3, _BOTH, (INTEROP_READY,), (FINDING,),
                        KotlinJvmAnnotationProcessor, Smell.KOTLIN_JVM_ANNOTATION_IN_JAVA),
)


def select_processors(registry: Sequence[ProcessorDescriptor],
                      requested: Iterable[Language],
                      config: DetectorConfig | None = None) -> list[ProcessorDescriptor]:
    """Descriptors whose languages are all requested (and whose smell is enabled), by (stage, id)."""
    if not registry:
        raise ValueError("processor registry is empty")
    requested = frozenset(requested)
    active = [d for d in registry if d.languages <= requested
              and (config is None or d.smell is None or config.is_enabled(d.smell))]
    # The hint collector only serves stage 3; drop it when nothing consumes its output.
    if not any(d.stage == 3 for d in active):
        active = [d for d in active if d.id != InteropHintsProcessor.id]
    return sorted(active, key=lambda d: (d.stage, d.id))


# ---------------------------------------------------------------- run

@dataclass
class AnalysisResult:
    languages: tuple[Language, ...]
    findings: list[Finding]
    per_smell: dict[Smell, int]
    files_affected: dict[Smell, int]
    graph_summary: dict
    skipped_files: list[tuple[str, str]]
    duration: float
    graph: DependencyGraph = field(default_factory=DependencyGraph)
    diagnostics: list[Diagnostic] = field(default_factory=list)
    files_analyzed: int = 0
    context: AnalysisContext | None = field(default=None, repr=False, compare=False)

    @property
    def total_findings(self) -> int:
        return len(self.findings)


def discover_sources(root: Path, languages: Iterable[Language]) -> list[Path]:
    """Source files under ``root`` in lexicographic order of their relative path.

    Symlinks are not followed; hidden directories and build output directories
    are skipped.
    """
    wanted = frozenset(languages)
    if root.is_file():
        return [root] if Language.from_path(root) in wanted else []
    found = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames[:] = [d for d in dirnames if not d.startswith(".") and d not in SKIPPED_DIRS]
        for name in filenames:
            path = Path(dirpath) / name
            if Language.from_path(name) in wanted and not path.is_symlink():
                found.append(path)
    return sorted(found, key=lambda p: p.relative_to(root).as_posix())


def _display_path(path: Path, root: Path) -> str:
    if root.is_file():
        return path.name
    return path.relative_to(root).as_posix()


def compute_stats(findings: Iterable[Finding], smells: Iterable[Smell]) -> tuple[dict, dict]:
    """Per-smell finding counts and distinct files touched (finding files plus related files)."""
    counts = {s: 0 for s in smells}
    files: dict[Smell, set[str]] = {s: set() for s in counts}
    for f in findings:
        counts[f.smell] = counts.get(f.smell, 0) + 1
        files.setdefault(f.smell, set()).update(f.files)
    return counts, {s: len(files[s]) for s in counts}


def run_analysis(project_root: str | Path, languages: Iterable[Language | str],
                 config: DetectorConfig | None = None,
                 registry: Sequence[ProcessorDescriptor] = REGISTRY) -> AnalysisResult:
    started = time.perf_counter()
    root = Path(project_root)
    if not root.exists():
        raise FileNotFoundError(f"{root}: no such file or directory")
    requested = frozenset(Language.parse(lang) if isinstance(lang, str) else lang for lang in languages)
    if not requested:
        raise ValueError("at least one language is required")
    ctx = AnalysisContext(requested, config or DetectorConfig())
    bus = MessageBus()

    paths = discover_sources(root, requested)
    if not paths:
        raise NoSourcesFound(f"{root}: no {'/'.join(sorted(l.value for l in requested))} sources found")

    active = select_processors(registry, requested, ctx.config)
    for desc in active:
        desc.factory(ctx, bus).attach()
    bus.subscribe(FINDING, lambda m: ctx.add_finding(m.payload), priority=1_000)

    def publish(msg: Message) -> None:
        report = bus.publish(msg)
        for sid, error in report.failures:
            ctx.diagnostics.append(Diagnostic(msg.origin or "<pipeline>", 0, "ProcessorFailed",
                                              f"{msg.kind} handler {sid}: {error}", "error"))

    # Stage 1: parse and per-file checks.
    for path in paths:
        shown = _display_path(path, root)
        try:
            unit = parse_unit(SourceFile.from_bytes(shown, path.read_bytes()))
        except (ParseError, SourceError, OSError) as exc:
            log.warning("skipping %s: %s", shown, exc)
            ctx.skipped_files.append((shown, str(exc)))
            continue
        ctx.units.append(unit)
        publish(Message(SOURCE_PARSED, unit, frozenset({unit.ast.language.value}), "pipeline"))
    publish(Message(STAGE_COMPLETED, 1, origin="pipeline"))
    ctx.close_stage(1)

    # Stage 2: whole-project index and graph.
    asts = [u.ast for u in ctx.units]
    ctx.index = build_symbol_index(asts, ctx.config.nullable_annotations, ctx.config.notnull_annotations)
    ctx.graph = extract_dependencies(ctx.index, asts)
    ctx.diagnostics.extend(ctx.index.diagnostics)
    ctx.diagnostics.extend(ctx.graph.diagnostics)
    publish(Message(GRAPH_BUILT, ctx.graph, origin="pipeline"))
    publish(Message(STAGE_COMPLETED, 2, origin="pipeline"))
    ctx.close_stage(2)

    # Stage 3: cross-language checks.
    if len(requested) >= 2:
        publish(Message(INTEROP_READY, ctx.index, origin="pipeline"))
    publish(Message(STAGE_COMPLETED, 3, origin="pipeline"))
    ctx.close_stage(3)
    ctx.clear_hints()

    findings = sorted(ctx.findings, key=Finding.sort_key)
    smells = [d.smell for d in active if d.smell is not None]
    per_smell, affected = compute_stats(findings, smells)
    return AnalysisResult(
        languages=tuple(sorted(requested, key=lambda l: l.value)),
        findings=findings,
        per_smell=per_smell,
        files_affected=affected,
        graph_summary=ctx.graph.summary(),
        skipped_files=list(ctx.skipped_files),
        duration=time.perf_counter() - started,
        graph=ctx.graph,
        diagnostics=sorted(ctx.diagnostics),
        files_analyzed=len(ctx.units),
        context=ctx,
    )
