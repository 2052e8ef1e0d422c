"""Cross-language detectors (Kotlin and Java analysed together).

Each detector has two halves: a ``*_candidates`` scan that only needs the
syntax trees (run in stage 1, its output parked in the context as a hint) and
the detector proper, which resolves candidates against the symbol index.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from kjlint.detectors.config import DetectorConfig
from kjlint.detectors.findings import Finding, Related, Smell
from kjlint.entities import Entity, Nullability, SymbolIndex, nullability_of, resolver_for
from kjlint.source import Language
from kjlint.syntax._base import JAVA_PRIMITIVES
from kjlint.syntax.model import AstRoot, Declaration, DeclKind, Reference, RefKind


@dataclass(frozen=True)
class Candidate:
    """A declaration or reference worth resolving in stage 3."""

    path: str
    decl: Declaration | None = None
    ref: Reference | None = None


def _by_path(asts: Iterable[AstRoot]) -> dict[str, AstRoot]:
    return {ast.path: ast for ast in asts}


def _related(entity: Entity, note: str) -> Related:
    return Related(entity.file, entity.range, note)


# ---------------------------------------------------------------- platform types

def platform_type_candidates(asts: Iterable[AstRoot]) -> list[Candidate]:
    """Non-private Kotlin functions/properties with an inferred type and a chain as their value."""
    out = []
    for ast in asts:
        if ast.language is not Language.KOTLIN:
            continue
        for decl in ast.all_declarations:
            if decl.value_ref is None or decl.has_explicit_return_type:
                continue
            if decl.visibility == "private":
                continue
            if decl.kind is DeclKind.FUNCTION and decl.is_single_expression or \
                    decl.kind is DeclKind.PROPERTY:
                out.append(Candidate(ast.path, decl=decl))
    return out


def _is_platform_source(entity: Entity, cfg: DetectorConfig) -> bool:
    if entity.language is not Language.JAVA or entity.kind not in (DeclKind.FUNCTION, DeclKind.FIELD):
        return False
    if entity.is_constructor:
        return False
    if entity.declared_type_name in JAVA_PRIMITIVES and entity.type_dims == 0:
        return False
    status = nullability_of(entity, cfg.nullable_annotations, cfg.notnull_annotations)
    return status is Nullability.UNANNOTATED


def detect_platform_type(index: SymbolIndex, asts: Iterable[AstRoot],
                         cfg: DetectorConfig | None = None,
                         candidates: Iterable[Candidate] | None = None) -> list[Finding]:
    cfg = cfg or DetectorConfig()
    files = _by_path(asts)
    candidates = platform_type_candidates(files.values()) if candidates is None else candidates
    out = []
    for cand in candidates:
        ast, decl = files[cand.path], cand.decl
        target = resolver_for(index, ast).resolve(decl.value_ref)
        if target is None or not _is_platform_source(target.entity, cfg):
            continue
        java = target.entity
        what = "function" if decl.kind is DeclKind.FUNCTION else "property"
        out.append(Finding(
            smell=Smell.PLATFORM_TYPE,
            severity=cfg.severity(Smell.PLATFORM_TYPE),
            file=ast.path,
            range=decl.name_range,
            message=f"{what} '{decl.name}' infers a platform type from unannotated Java "
                    f"'{java.qualified_name}'; declare its type explicitly",
            entities=(decl.qualified_name, java.qualified_name),
            related=(_related(java, "Java declaration without nullability annotation"),),
        ))
    return out


# ---------------------------------------------------------------- read-only collections

def mutator_call_candidates(asts: Iterable[AstRoot], cfg: DetectorConfig | None = None) -> list[Candidate]:
    cfg = cfg or DetectorConfig()
    out = []
    for ast in asts:
        if ast.language is not Language.JAVA:
            continue
        for ref in ast.references:
            if ref.kind is RefKind.CALL and ref.confident and ref.name in cfg.mutator_methods and (
                    len(ref.name_path) > 1 or ref.receiver_origin):
                out.append(Candidate(ast.path, ref=ref))
    return out


def _readonly_source(resolver, ref: Reference, cfg: DetectorConfig) -> Entity | None:
    hops = []
    if len(ref.name_path) > 1:
        hops.append(ref.name_path[:-1])
    if ref.receiver_origin:
        hops.append(tuple(ref.receiver_origin.split(".")))
    for path in hops:
        probe = Reference(RefKind.CALL, path, ref.range, ref.enclosing_decl, scope=ref.scope)
        target = resolver.resolve(probe)
        if target is None:
            continue
        entity = target.entity
        if entity.language is Language.KOTLIN and entity.kind in (DeclKind.FUNCTION, DeclKind.PROPERTY) \
                and entity.declared_type_name in cfg.readonly_collection_types:
            return entity
    return None


def detect_immutable_collection_mutation(index: SymbolIndex, asts: Iterable[AstRoot],
                                         cfg: DetectorConfig | None = None,
                                         candidates: Iterable[Candidate] | None = None) -> list[Finding]:
    cfg = cfg or DetectorConfig()
    files = _by_path(asts)
    candidates = mutator_call_candidates(files.values(), cfg) if candidates is None else candidates
    out = []
    for cand in candidates:
        ast, ref = files[cand.path], cand.ref
        source = _readonly_source(resolver_for(index, ast), ref, cfg)
        if source is None:
            continue
        coll = source.declared_type_name.rsplit(".", 1)[-1]
        out.append(Finding(
            smell=Smell.IMMUTABLE_COLLECTION_MUTATION,
            severity=cfg.severity(Smell.IMMUTABLE_COLLECTION_MUTATION),
            file=ast.path,
            range=ref.range,
            message=f"Java calls '{ref.name}' on a read-only Kotlin {coll} from "
                    f"'{source.qualified_name}'",
            entities=(source.qualified_name,),
            related=(_related(source, f"declared as read-only {coll}"),),
        ))
    return out


# ---------------------------------------------------------------- internal exposure

def java_reference_candidates(asts: Iterable[AstRoot]) -> list[Candidate]:
    """Every confident Java reference, imports included."""
    return [Candidate(ast.path, ref=ref) for ast in asts if ast.language is Language.JAVA
            for ref in ast.references if ref.confident]


def _internal_owner(index: SymbolIndex, entity: Entity) -> Entity | None:
    current: Entity | None = entity
    while current is not None:
        if current.visibility == "internal":
            return current
        current = index.lookup(current.owner) if current.owner else None
    return None


def detect_internal_exposure(index: SymbolIndex, asts: Iterable[AstRoot],
                             cfg: DetectorConfig | None = None,
                             candidates: Iterable[Candidate] | None = None) -> list[Finding]:
    """Java references to Kotlin ``internal`` declarations, one finding per expression.

    References of one member-access chain share their start offset; only the
    first of them that reaches an internal declaration is reported.
    """
    cfg = cfg or DetectorConfig()
    files = _by_path(asts)
    candidates = java_reference_candidates(files.values()) if candidates is None else candidates
    out = []
    reported: set[tuple[str, int]] = set()
    resolvers = {}
    for cand in candidates:
        ast, ref = files[cand.path], cand.ref
        key = (ast.path, ref.range.start)
        if key in reported:
            continue
        resolver = resolvers.get(ast.path) or resolvers.setdefault(ast.path, resolver_for(index, ast))
        target = resolver.resolve(ref)
        if target is None or target.entity.language is not Language.KOTLIN:
            continue
        internal = _internal_owner(index, target.entity)
        if internal is None:
            continue
        reported.add(key)
        name = target.entity.qualified_name
        via = "" if internal is target.entity else f" (member of internal '{internal.qualified_name}')"
        out.append(Finding(
            smell=Smell.INTERNAL_EXPOSURE,
            severity=cfg.severity(Smell.INTERNAL_EXPOSURE),
            file=ast.path,
            range=ref.range,
            message=f"Java uses Kotlin internal declaration '{name}'{via}",
            entities=(name,),
            related=(_related(internal, "declared internal"),),
        ))
    return out


# ---------------------------------------------------------------- Kotlin JVM annotations

def java_annotation_candidates(asts: Iterable[AstRoot]) -> list[Candidate]:
    return [Candidate(ast.path, ref=ref) for ast in asts if ast.language is Language.JAVA
            for ref in ast.references if ref.kind is RefKind.ANNOTATION_USE]


def kotlin_annotation_name(ast: AstRoot, ref: Reference, cfg: DetectorConfig) -> str | None:
    """Qualified Kotlin name of an annotation written in Java, if it is one."""
    written = ".".join(ref.name_path)
    if len(ref.name_path) > 1:
        return written if written.startswith("kotlin.") else None
    for imp in ast.imports:
        if imp.visible_name == written:
            return imp.target if imp.target.startswith("kotlin.") else None
    if written in cfg.kotlin_jvm_annotations and any(
            imp.is_wildcard and imp.target == "kotlin.jvm" for imp in ast.imports):
        return f"kotlin.jvm.{written}"
    return None


def detect_kotlin_jvm_annotation_in_java(asts: Iterable[AstRoot], cfg: DetectorConfig | None = None,
                                         candidates: Iterable[Candidate] | None = None) -> list[Finding]:
    cfg = cfg or DetectorConfig()
    files = _by_path(asts)
    candidates = java_annotation_candidates(files.values()) if candidates is None else candidates
    out = []
    for cand in candidates:
        ast, ref = files[cand.path], cand.ref
        qualified = kotlin_annotation_name(ast, ref, cfg)
        if qualified is None:
            continue
        out.append(Finding(
            smell=Smell.KOTLIN_JVM_ANNOTATION_IN_JAVA,
            severity=cfg.severity(Smell.KOTLIN_JVM_ANNOTATION_IN_JAVA),
            file=ast.path,
            range=ref.range,
            message=f"Kotlin annotation '@{qualified}' has no effect in Java source",
            entities=(qualified,),
        ))
    return out
