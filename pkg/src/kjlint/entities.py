"""Project-wide symbol index and cross-language reference resolution."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from enum import Enum

from kjlint.diagnostics import Diagnostic
from kjlint.source import Language, SourceRange
from kjlint.syntax.model import (
    CLASS_LIKE,
    AstRoot,
    Declaration,
    DeclKind,
    LocalVar,
    Reference,
    RefKind,
)

NULLABILITY_PREFIXES = ("org.jetbrains.annotations", "javax.annotation", "androidx.annotation",
                        "jakarta.annotation")
DEFAULT_NULLABLE = frozenset({"Nullable", "CheckForNull"})
DEFAULT_NOTNULL = frozenset({"NotNull", "NonNull", "Nonnull"})

# Kotlin names that are visible without an import.
_KOTLIN_COLLECTIONS = frozenset("""
    Collection Iterable List Map Set MutableCollection MutableIterable MutableList MutableMap
    MutableSet ArrayList HashMap HashSet LinkedHashMap LinkedHashSet
""".split())

_TYPE_REF_KINDS = frozenset({RefKind.TYPE_USE, RefKind.SUPER_TYPE, RefKind.OBJECT_CREATION,
                             RefKind.ANNOTATION_USE})
_MAX_TRACE = 8


class Nullability(str, Enum):
    ANNOTATED_NULLABLE = "AnnotatedNullable"
    ANNOTATED_NOT_NULL = "AnnotatedNotNull"
    UNANNOTATED = "Unannotated"
    NOT_APPLICABLE = "NotApplicable"


class Via(str, Enum):
    EXPLICIT_IMPORT = "ExplicitImport"
    WILDCARD_IMPORT = "WildcardImport"
    SAME_PACKAGE = "SamePackage"
    QUALIFIED_NAME = "QualifiedName"


@dataclass(frozen=True)
class Entity:
    qualified_name: str
    kind: DeclKind
    language: Language
    visibility: str  # public | internal | protected | private | package
    file: str
    range: SourceRange
    nullability: Nullability = Nullability.NOT_APPLICABLE
    declared_type_name: str | None = None
    param_count: int = 0
    owner: str | None = None
    annotations: tuple[str, ...] = ()
    supertypes: tuple[str, ...] = ()
    is_constructor: bool = False
    type_dims: int = 0
    synthetic: bool = False  # Kotlin file facade such as ``UtilKt``

    @property
    def name(self) -> str:
        return self.qualified_name.rsplit(".", 1)[-1]

    @property
    def is_class_like(self) -> bool:
        return self.kind in CLASS_LIKE


@dataclass(frozen=True)
class ResolvedTarget:
    entity: Entity
    via: Via
    cross_language: bool


@dataclass
class SymbolIndex:
    by_qualified_name: dict[str, Entity] = field(default_factory=dict)
    by_simple_name: dict[str, list[Entity]] = field(default_factory=dict)
    per_file: dict[str, list[Entity]] = field(default_factory=dict)
    members: dict[str, dict[str, Entity]] = field(default_factory=dict)
    extensions: dict[str, dict[str, Entity]] = field(default_factory=dict)
    facades: dict[str, Entity] = field(default_factory=dict)
    companions: dict[str, str] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)
    # Declaration behind each indexed entity, for type inference of implicit Kotlin types.
    decls: dict[str, tuple[Declaration, AstRoot]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.by_qualified_name)

    def lookup(self, qualified_name: str) -> Entity | None:
        return self.by_qualified_name.get(qualified_name) or self.facades.get(qualified_name)

    def entities(self) -> list[Entity]:
        return list(self.by_qualified_name.values())


# ---------------------------------------------------------------- nullability

def _matches(name: str, names: frozenset[str] | set[str]) -> bool:
    if name in names:
        return True
    if "." in name:
        prefix, simple = name.rsplit(".", 1)
        return prefix in NULLABILITY_PREFIXES and simple in names
    return False


def nullability_of(entity: Entity, nullable: Iterable[str] = DEFAULT_NULLABLE,
                   notnull: Iterable[str] = DEFAULT_NOTNULL) -> Nullability:
    """Nullability status of a Java function, field or parameter.

    Annotation names are compared as the index stored them: qualified when the
    declaring file imported them explicitly, as written otherwise.
    """
    if entity.language is not Language.JAVA or entity.kind not in (
            DeclKind.FUNCTION, DeclKind.FIELD, DeclKind.PARAMETER):
        return Nullability.NOT_APPLICABLE
    nullable, notnull = frozenset(nullable), frozenset(notnull)
    if any(_matches(a, nullable) for a in entity.annotations):
        return Nullability.ANNOTATED_NULLABLE
    if any(_matches(a, notnull) for a in entity.annotations):
        return Nullability.ANNOTATED_NOT_NULL
    return Nullability.UNANNOTATED


# ---------------------------------------------------------------- index building

def _visibility(decl: Declaration, language: Language, in_interface: bool) -> str:
    if decl.kind is DeclKind.PARAMETER:
        return "private"
    vis = decl.visibility
    if vis != "default":
        return vis
    if language is Language.KOTLIN or in_interface:
        return "public"
    return "package"


class _Qualifier:
    """Turns a type name as written in one file into a dotted name."""

    def __init__(self, known: set[str], ast: AstRoot) -> None:
        self.known = known
        self.ast = ast
        self.by_qn = {d.qualified_name: d for d in ast.all_declarations}

    def __call__(self, name: str, scope: Declaration | None) -> str:
        ast = self.ast
        head, _, rest = name.partition(".")
        tail = "." + rest if rest else ""
        decl = scope
        while decl is not None:
            if decl.kind in CLASS_LIKE:
                cand = f"{decl.qualified_name}.{name}"
                if cand in self.known:
                    return cand
            decl = self.by_qn.get(decl.parent) if decl.parent else None
        for imp in ast.imports:
            if imp.visible_name == head:
                return imp.target + tail
        cand = ast.qualify(name)
        if cand in self.known:
            return cand
        for imp in ast.imports:
            if imp.is_wildcard and f"{imp.target}.{name}" in self.known:
                return f"{imp.target}.{name}"
        if ast.language is Language.KOTLIN and name in _KOTLIN_COLLECTIONS:
            return f"kotlin.collections.{name}"
        return name


def _annotation_names(decl: Declaration, ast: AstRoot) -> tuple[str, ...]:
    out = []
    for ann in decl.annotations:
        name = ann.name
        if "." not in name:
            for imp in ast.imports:
                if imp.visible_name == name:
                    name = imp.target
                    break
        out.append(name)
    return tuple(out)


def build_symbol_index(asts: Iterable[AstRoot], nullable: Iterable[str] = DEFAULT_NULLABLE,
                       notnull: Iterable[str] = DEFAULT_NOTNULL) -> SymbolIndex:
    """Index every declaration of every file; files are taken in path order."""
    asts = sorted(asts, key=lambda a: a.path)
    nullable, notnull = frozenset(nullable), frozenset(notnull)
    index = SymbolIndex()
    known: set[str] = set()
    for ast in asts:
        known.update(d.qualified_name for d in ast.all_declarations if d.kind in CLASS_LIKE)
        if ast.language is Language.KOTLIN and any(
                d.kind in (DeclKind.FUNCTION, DeclKind.PROPERTY) for d in ast.declarations):
            known.add(ast.jvm_facade_name())

    for ast in asts:
        qualify = _Qualifier(known, ast)
        by_qn = qualify.by_qn
        for decl in ast.all_declarations:
            parent = by_qn.get(decl.parent) if decl.parent else None
            in_interface = decl.in_interface or (parent is not None and parent.kind is DeclKind.INTERFACE)
            entity = _entity(decl, ast, qualify, parent, in_interface, nullable, notnull)
            if _add(index, entity, decl, ast):
                if decl.kind is DeclKind.OBJECT and "companion" in decl.modifiers and decl.parent:
                    index.companions.setdefault(decl.parent, decl.qualified_name)
                if decl.receiver_type is not None:
                    recv = qualify(decl.receiver_type.name, parent)
                    index.extensions.setdefault(recv, {}).setdefault(decl.name, entity)
            for param in decl.params:
                pent = _entity(param, ast, qualify, decl, False, nullable, notnull)
                _add(index, pent, param, ast)
        _add_facade(index, ast)
    return index


def _entity(decl: Declaration, ast: AstRoot, qualify: _Qualifier, parent: Declaration | None,
            in_interface: bool, nullable: frozenset[str], notnull: frozenset[str]) -> Entity:
    declared = None
    dims = 0
    if decl.declared_type is not None:
        scope = parent if decl.kind is DeclKind.PARAMETER else decl
        declared = qualify(decl.declared_type.name, scope)
        dims = decl.declared_type.array_dims
    elif decl.is_constructor and parent is not None:
        declared = parent.qualified_name
    entity = Entity(
        qualified_name=decl.qualified_name,
        kind=decl.kind,
        language=ast.language,
        visibility=_visibility(decl, ast.language, in_interface),
        file=ast.path,
        range=decl.range,
        declared_type_name=declared,
        param_count=decl.param_count,
        owner=decl.parent,
        annotations=_annotation_names(decl, ast),
        supertypes=tuple(qualify(t.name, parent) for t in decl.supertypes),
        is_constructor=decl.is_constructor,
        type_dims=dims,
    )
    status = nullability_of(entity, nullable, notnull)
    if status is not Nullability.NOT_APPLICABLE:
        entity = replace(entity, nullability=status)
    return entity


def _add(index: SymbolIndex, entity: Entity, decl: Declaration, ast: AstRoot) -> bool:
    qn = entity.qualified_name
    existing = index.by_qualified_name.get(qn)
    if existing is not None:
        if existing.file == entity.file and existing.kind is entity.kind is DeclKind.FUNCTION or (
                existing.kind is DeclKind.PARAMETER and entity.kind is DeclKind.PARAMETER
                and existing.file == entity.file):
            code, level = "OverloadCollapsed", "debug"
        else:
            code, level = "DuplicateSymbol", "warning"
        index.diagnostics.append(Diagnostic(
            entity.file, entity.range.line, code,
            f"{qn} already declared in {existing.file}:{existing.range.line}", level))
        return False
    index.by_qualified_name[qn] = entity
    index.by_simple_name.setdefault(entity.name, []).append(entity)
    index.per_file.setdefault(entity.file, []).append(entity)
    index.decls[qn] = (decl, ast)
    if entity.owner is not None:
        index.members.setdefault(entity.owner, {}).setdefault(entity.name, entity)
    return True


def _add_facade(index: SymbolIndex, ast: AstRoot) -> None:
    if ast.language is not Language.KOTLIN:
        return
    top = [d for d in ast.declarations if d.kind in (DeclKind.FUNCTION, DeclKind.PROPERTY)]
    if not top:
        return
    qn = ast.jvm_facade_name()
    if qn in index.facades or qn in index.by_qualified_name:
        return
    index.facades[qn] = Entity(
        qualified_name=qn, kind=DeclKind.CLASS, language=Language.KOTLIN, visibility="public",
        file=ast.path, range=top[0].range, synthetic=True)
    members = index.members.setdefault(qn, {})
    for decl in top:
        entity = index.by_qualified_name.get(decl.qualified_name)
        if entity is not None and entity.file == ast.path:
            members.setdefault(decl.name, entity)


# ---------------------------------------------------------------- resolution

def _decapitalize(name: str) -> str:
    return name[:1].lower() + name[1:]


class _Resolver:
    def __init__(self, index: SymbolIndex, ast: AstRoot) -> None:
        self.index = index
        self.ast = ast
        self.by_qn = {d.qualified_name: d for d in ast.all_declarations}

    # -- members

    def member(self, owner: Entity, name: str, seen: set[str] | None = None) -> Entity | None:
        index = self.index
        seen = set() if seen is None else seen
        if owner.qualified_name in seen:
            return None
        seen.add(owner.qualified_name)
        table = index.members.get(owner.qualified_name, {})
        found = table.get(name)
        if found is not None and found.kind is not DeclKind.PARAMETER:
            return found
        if name == "INSTANCE" and owner.kind is DeclKind.OBJECT:
            return owner
        found = self._accessor(owner, table, name)
        if found is not None:
            return found
        ext = index.extensions.get(owner.qualified_name, {}).get(name)
        if ext is not None:
            return ext
        companion = index.companions.get(owner.qualified_name)
        if companion is not None and companion in index.by_qualified_name:
            found = self.member(index.by_qualified_name[companion], name, seen)
            if found is not None:
                return found
        for st in owner.supertypes:
            parent = index.lookup(st)
            if parent is not None:
                found = self.member(parent, name, seen)
                if found is not None:
                    return found
        return None

    def _accessor(self, owner: Entity, table: dict[str, Entity], name: str) -> Entity | None:
        """Property syntax across the boundary: ``getName()`` for Kotlin ``name`` and back."""
        if owner.language is Language.KOTLIN and self.ast.language is Language.JAVA:
            for prefix in ("get", "set", "is"):
                if name.startswith(prefix) and len(name) > len(prefix) and name[len(prefix)].isupper():
                    for cand in (_decapitalize(name[len(prefix):]), name):
                        hit = table.get(cand)
                        if hit is not None and hit.kind is DeclKind.PROPERTY:
                            return hit
        if owner.language is Language.JAVA and self.ast.language is Language.KOTLIN:
            cap = name[:1].upper() + name[1:]
            for cand in ("get" + cap, "is" + cap, name if name.startswith("is") else None):
                hit = table.get(cand) if cand else None
                if hit is not None and hit.kind is DeclKind.FUNCTION and hit.param_count == 0:
                    return hit
        return None

    # -- types and values

    def type_of(self, entity: Entity, depth: int) -> Entity | None:
        """Class-like entity describing values of ``entity``."""
        if entity.is_class_like:
            return entity
        if entity.declared_type_name:
            return self.index.lookup(entity.declared_type_name)
        if depth >= _MAX_TRACE:
            return None
        found = self.index.decls.get(entity.qualified_name)
        if found is None:
            return None
        decl, ast = found
        if decl.value_ref is None:
            return None
        resolver = self if ast is self.ast else _Resolver(self.index, ast)
        target = resolver.resolve(decl.value_ref, depth + 1)
        if target is None:
            return None
        return resolver.type_of(target.entity, depth + 1)

    def local(self, name: str, scope: Declaration | None) -> tuple[bool, LocalVar | None, Declaration | None]:
        decl = scope
        while decl is not None:
            if name in decl.locals:
                return True, decl.locals[name], decl
            if decl.kind in CLASS_LIKE and self.ast.language is Language.KOTLIN:
                for child in decl.children:
                    if child.is_constructor and child.name == decl.name and name in child.locals:
                        return True, child.locals[name], child
            decl = self.by_qn.get(decl.parent) if decl.parent else None
        return False, None, None

    def qualify_type(self, name: str, scope: Declaration | None) -> str:
        known = _KnownView(self.index)
        return _Qualifier(known, self.ast)(name, scope)

    # -- heads

    def head(self, ref: Reference, depth: int) -> tuple[Entity, Via, int, bool] | None:
        """Resolve the first name of ``ref``; returns (entity, via, consumed, is_value)."""
        index = self.index
        ast = self.ast
        path = ref.name_path
        head = path[0]
        scope = ast.scope_of(ref)
        if head in ("this", "super"):
            decl = scope
            while decl is not None and decl.kind not in CLASS_LIKE:
                if decl.receiver_type is not None:
                    recv = self.receiver(decl)
                    return None if recv is None else (recv, Via.SAME_PACKAGE, 1, True)
                decl = self.by_qn.get(decl.parent) if decl.parent else None
            if decl is None:
                return None
            cls = index.lookup(decl.qualified_name)
            if cls is None:
                return None
            if head == "super":
                for st in cls.supertypes:
                    parent = index.lookup(st)
                    if parent is not None and len(path) > 1:
                        return parent, Via.SAME_PACKAGE, 1, True
            return cls, Via.SAME_PACKAGE, 1, True
        if ref.kind not in _TYPE_REF_KINDS:
            is_local, var, owner = self.local(head, scope)
            if is_local:
                ent = self._local_value(var, owner, ref, depth)
                return None if ent is None else (ent, Via.SAME_PACKAGE, 1, True)
        decl = scope
        while decl is not None:
            if decl.kind in CLASS_LIKE:
                cls = index.lookup(decl.qualified_name)
                if cls is not None:
                    if cls.name == head and ref.kind in _TYPE_REF_KINDS:
                        return cls, Via.SAME_PACKAGE, 1, False
                    hit = self.member(cls, head)
                    if hit is not None:
                        return hit, Via.SAME_PACKAGE, 1, not hit.is_class_like
            decl = self.by_qn.get(decl.parent) if decl.parent else None
        decl = scope
        while decl is not None and ref.kind not in _TYPE_REF_KINDS:
            if decl.receiver_type is not None:
                recv = self.receiver(decl)
                hit = self.member(recv, head) if recv is not None else None
                if hit is not None:
                    return hit, Via.SAME_PACKAGE, 1, not hit.is_class_like
            decl = self.by_qn.get(decl.parent) if decl.parent else None
        for imp in ast.imports:
            if imp.visible_name == head:
                hit = index.lookup(imp.target)
                if hit is None and "." in imp.target:
                    owner_qn, _, member = imp.target.rpartition(".")
                    owner = index.lookup(owner_qn)
                    hit = self.member(owner, member) if owner is not None else None
                if hit is not None:
                    return hit, Via.EXPLICIT_IMPORT, 1, not hit.is_class_like
                return None
        hit = index.lookup(ast.qualify(head))
        if hit is not None:
            return hit, Via.SAME_PACKAGE, 1, not hit.is_class_like
        for imp in ast.imports:
            if not imp.is_wildcard:
                continue
            hit = index.lookup(f"{imp.target}.{head}")
            if hit is None:
                owner = index.lookup(imp.target)
                hit = self.member(owner, head) if owner is not None else None
            if hit is not None:
                return hit, Via.WILDCARD_IMPORT, 1, not hit.is_class_like
        for k in range(len(path), 1, -1):
            hit = index.lookup(".".join(path[:k]))
            if hit is not None:
                return hit, Via.QUALIFIED_NAME, k, False
        return None

    def receiver(self, decl: Declaration) -> Entity | None:
        parent = self.by_qn.get(decl.parent) if decl.parent else None
        return self.index.lookup(self.qualify_type(decl.receiver_type.name, parent))

    def _local_value(self, var: LocalVar, owner: Declaration, ref: Reference,
                     depth: int) -> Entity | None:
        if var.type is not None:
            return self.index.lookup(self.qualify_type(var.type.name, owner))
        if var.origin and depth < _MAX_TRACE:
            hop = Reference(RefKind.CALL, var.origin, ref.range, ref.enclosing_decl, scope=ref.scope)
            target = self.resolve(hop, depth + 1)
            if target is None:
                return None
            if var.created and target.entity.is_class_like:
                return target.entity
            return self.type_of(target.entity, depth + 1)
        return None

    # -- whole references

    def resolve(self, ref: Reference, depth: int = 0) -> ResolvedTarget | None:
        index = self.index
        path = ref.name_path
        if ref.kind is RefKind.IMPORT_USE:
            target = ".".join(path)
            hit = index.lookup(target)
            if hit is None and len(path) > 1:
                owner = index.lookup(".".join(path[:-1]))
                hit = self.member(owner, path[-1]) if owner is not None else None
            if hit is None:
                return None
            return self._target(hit, Via.EXPLICIT_IMPORT)
        found = self.head(ref, depth)
        if found is None:
            return None
        current, via, consumed, is_value = found
        if consumed == len(path) and is_value and current.is_class_like:
            return None  # a bare local or `this`: the value, not its class
        for name in path[consumed:]:
            owner = self.type_of(current, depth) if is_value else current
            if owner is None:
                return None
            nxt = self.member(owner, name)
            if nxt is None:
                return None
            current = nxt
            is_value = not nxt.is_class_like or nxt.kind is DeclKind.OBJECT
        return self._target(current, via)

    def _target(self, entity: Entity, via: Via) -> ResolvedTarget:
        return ResolvedTarget(entity, via, entity.language is not self.ast.language)


class _KnownView:
    """``in`` test over the index, used to qualify types after indexing."""

    def __init__(self, index: SymbolIndex) -> None:
        self.index = index

    def __contains__(self, qn: str) -> bool:
        return self.index.lookup(qn) is not None


def resolve_reference(index: SymbolIndex, ref: Reference, from_file: AstRoot) -> ResolvedTarget | None:
    """Resolve ``ref`` to an indexed entity; ``None`` means Unresolved (usually external)."""
    return _Resolver(index, from_file).resolve(ref)


def resolver_for(index: SymbolIndex, ast: AstRoot) -> _Resolver:
    """A resolver bound to one file, reusable across that file's references."""
    return _Resolver(index, ast)


def qualified_type_name(index: SymbolIndex, ast: AstRoot, name: str,
                        scope: Declaration | None) -> str:
    return _Resolver(index, ast).qualify_type(name, scope)
