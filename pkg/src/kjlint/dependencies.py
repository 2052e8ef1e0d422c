"""Typed dependency edges between files, derived from resolved references."""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum

from kjlint import canonical
from kjlint.diagnostics import Diagnostic
from kjlint.entities import Entity, ResolvedTarget, SymbolIndex, resolver_for
from kjlint.source import Language, SourceRange
from kjlint.syntax.model import AstRoot, DeclKind, Reference, RefKind, TypeRole

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
_EXPR_LIMIT = 120


class DependencyType(str, Enum):
    ACCESS = "Access"
    CALL = "Call"
    CREATE = "Create"
    EXTEND = "Extend"
    EXTENSION = "Extension"
    LVT = "LVT"
    PT = "PT"
    IMPLEMENT = "Implement"
    IMPORT = "Import"
    PARAMETER = "Parameter"
    RETURN = "Return"


_VALUE_KINDS = (DeclKind.PROPERTY, DeclKind.FIELD)
_ROLE_TYPES = {
    TypeRole.PARAMETER: DependencyType.PARAMETER,
    TypeRole.RETURN: DependencyType.RETURN,
    TypeRole.LOCAL: DependencyType.LVT,
    TypeRole.PROPERTY: DependencyType.PT,
    TypeRole.RECEIVER: DependencyType.EXTENSION,
}


@dataclass(frozen=True)
class DependencyEdge:
    from_file: str
    to_file: str
    from_entity: str
    to_entity: str
    dep_type: DependencyType
    line: int
    col: int
    expression: str
    cross_language: bool
    location: SourceRange | None = field(default=None, compare=False)

    def sort_key(self) -> tuple:
        return (self.from_file, self.line, self.col, self.to_file, self.dep_type.value,
                self.to_entity, self.from_entity)

    def to_json(self) -> dict:
        return {
            "from": self.from_file, "to": self.to_file,
            "fromEntity": self.from_entity, "toEntity": self.to_entity,
            "type": self.dep_type.value, "line": self.line, "col": self.col,
            "expr": self.expression, "crossLanguage": self.cross_language,
        }

    @classmethod
    def from_json(cls, obj: dict) -> DependencyEdge:
        return cls(obj["from"], obj["to"], obj["fromEntity"], obj["toEntity"],
                   DependencyType(obj["type"]), obj["line"], obj["col"], obj["expr"],
                   obj["crossLanguage"])


@dataclass
class DependencyGraph:
    nodes: dict[str, Language] = field(default_factory=dict)
    edges: list[DependencyEdge] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def adjacency(self) -> dict[str, list[str]]:
        """File-level projection of the edge list."""
        adj: dict[str, set[str]] = {path: set() for path in self.nodes}
        for edge in self.edges:
            adj.setdefault(edge.from_file, set()).add(edge.to_file)
        return {path: sorted(targets) for path, targets in sorted(adj.items())}

    def same_language_adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, set[str]] = {path: set() for path in self.nodes}
        for edge in self.edges:
            if not edge.cross_language:
                adj.setdefault(edge.from_file, set()).add(edge.to_file)
        return {path: sorted(targets) for path, targets in sorted(adj.items())}

    def summary(self) -> dict:
        return {"nodes": len(self.nodes), "edges": len(self.edges),
                "crossLanguageEdges": sum(e.cross_language for e in self.edges)}


def classify_edge(ref: Reference, target: ResolvedTarget | Entity,
                  from_language: Language) -> DependencyType | None:
    """Dependency type for a resolved reference, or None when no kind applies."""
    entity = target.entity if isinstance(target, ResolvedTarget) else target
    kind = ref.kind
    if kind is RefKind.IMPORT_USE:
        return DependencyType.IMPORT
    if kind is RefKind.OBJECT_CREATION:
        if entity.is_class_like:
            return DependencyType.CREATE
        return DependencyType.CALL if entity.kind is DeclKind.FUNCTION else None
    if kind is RefKind.CALL:
        if entity.kind is DeclKind.FUNCTION:
            return DependencyType.CALL
        if entity.kind in _VALUE_KINDS:
            return DependencyType.ACCESS
        return DependencyType.CREATE if entity.kind is DeclKind.CLASS else None
    if kind is RefKind.FIELD_ACCESS:
        if entity.kind in _VALUE_KINDS:
            return DependencyType.ACCESS
        return DependencyType.CALL if entity.kind is DeclKind.FUNCTION else None
    if kind is RefKind.SUPER_TYPE:
        if entity.kind is DeclKind.INTERFACE:
            return DependencyType.IMPLEMENT
        return DependencyType.EXTEND if entity.is_class_like else None
    if kind is RefKind.TYPE_USE and entity.is_class_like:
        dep = _ROLE_TYPES.get(ref.role)
        if dep in (DependencyType.PT, DependencyType.EXTENSION) and not (
                from_language is Language.KOTLIN and entity.language is Language.JAVA):
            return None
        return dep
    return None


def _excerpt(ast: AstRoot, rng: SourceRange) -> str:
    text = " ".join(ast.file.slice(rng).split())
    return text if len(text) <= _EXPR_LIMIT else text[:_EXPR_LIMIT - 3] + "..."


def extract_dependencies(index: SymbolIndex, asts: Iterable[AstRoot]) -> DependencyGraph:
    """One edge per resolvable, classifiable reference that leaves its own file."""
    graph = DependencyGraph()
    asts = sorted(asts, key=lambda a: a.path)
    for ast in asts:
        graph.nodes[ast.path] = ast.language
    for ast in asts:
        resolver = resolver_for(index, ast)
        for ref in ast.references:
            if not ref.confident:
                continue
            target = resolver.resolve(ref)
            if target is None or target.entity.file == ast.path:
                continue
            dep = classify_edge(ref, target, ast.language)
            if dep is None:
                log.debug("unmapped %s %s -> %s", ref.kind.value, ref.name_path,
                          target.entity.qualified_name)
                graph.diagnostics.append(Diagnostic(
                    ast.path, ref.range.line, "UnmappedEdge",
                    f"{ref.kind.value} {'.'.join(ref.name_path)} -> "
                    f"{target.entity.kind.value} {target.entity.qualified_name}", "debug"))
                continue
            graph.nodes.setdefault(target.entity.file, target.entity.language)
            graph.edges.append(DependencyEdge(
                from_file=ast.path,
                to_file=target.entity.file,
                from_entity=ref.enclosing_decl or ast.path,
                to_entity=target.entity.qualified_name,
                dep_type=dep,
                line=ref.range.line,
                col=ref.range.col,
                expression=_excerpt(ast, ref.range),
                cross_language=target.cross_language,
                location=ref.range,
            ))
    graph.edges.sort(key=DependencyEdge.sort_key)
    return graph


def graph_to_json(graph: DependencyGraph) -> dict:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "nodes": [{"path": p, "language": lang.value} for p, lang in sorted(graph.nodes.items())],
        "edges": [e.to_json() for e in sorted(graph.edges, key=DependencyEdge.sort_key)],
    }


def export_graph_json(graph: DependencyGraph) -> bytes:
    return canonical.dumps(graph_to_json(graph))


def graph_from_json(data: bytes | str) -> DependencyGraph:
    obj = json.loads(data)
    graph = DependencyGraph()
    for node in obj["nodes"]:
        graph.nodes[node["path"]] = Language(node["language"])
    graph.edges = sorted((DependencyEdge.from_json(e) for e in obj["edges"]),
                         key=DependencyEdge.sort_key)
    return graph
