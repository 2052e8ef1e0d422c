"""Syntax-level records shared by the Kotlin and Java front ends."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from kjlint.source import SourceFile, SourceRange


class ParseError(Exception):
    def __init__(self, path: str, line: int, col: int, expected: str) -> None:
        super().__init__(f"{path}:{line}:{col}: expected {expected}")
        self.path = path
        self.line = line
        self.col = col
        self.expected = expected


class DeclKind(str, Enum):
    CLASS = "Class"
    INTERFACE = "Interface"
    OBJECT = "Object"
    ENUM = "Enum"
    FUNCTION = "Function"
    PROPERTY = "Property"
    FIELD = "Field"
    PARAMETER = "Parameter"
    ANNOTATION_USE = "Annotation-use"


CLASS_LIKE = frozenset({DeclKind.CLASS, DeclKind.INTERFACE, DeclKind.OBJECT, DeclKind.ENUM})
VALUE_KINDS = frozenset({DeclKind.PROPERTY, DeclKind.FIELD, DeclKind.PARAMETER})


class RefKind(str, Enum):
    CALL = "Call"
    FIELD_ACCESS = "FieldAccess"
    TYPE_USE = "TypeUse"
    OBJECT_CREATION = "ObjectCreation"
    SUPER_TYPE = "SuperType"
    ANNOTATION_USE = "AnnotationUse"
    IMPORT_USE = "ImportUse"


class TypeRole(str, Enum):
    """Where a type name was written; drives dependency classification."""

    PARAMETER = "parameter"
    RETURN = "return"
    LOCAL = "local"
    PROPERTY = "property"  # Kotlin member or top-level property
    FIELD = "field"  # Java field
    RECEIVER = "receiver"  # Kotlin extension receiver
    GENERIC = "generic"  # type argument, discarded from declared types
    OTHER = "other"  # casts, is/as checks, throws, bounds, class literals


@dataclass(frozen=True)
class TypeRef:
    name: str
    range: SourceRange
    nullable: bool = False
    array_dims: int = 0

    @property
    def simple_name(self) -> str:
        return self.name.rsplit(".", 1)[-1]


@dataclass(frozen=True)
class ImportDecl:
    target: str
    range: SourceRange
    is_wildcard: bool = False
    alias: str | None = None
    is_static: bool = False

    @property
    def visible_name(self) -> str | None:
        """Name the import introduces into the file scope (``None`` for wildcards)."""
        if self.is_wildcard:
            return None
        return self.alias or self.target.rsplit(".", 1)[-1]


@dataclass(frozen=True)
class AnnotationRef:
    name: str
    range: SourceRange

    @property
    def simple_name(self) -> str:
        return self.name.rsplit(".", 1)[-1]


@dataclass(frozen=True)
class Reference:
    kind: RefKind
    name_path: tuple[str, ...]
    range: SourceRange
    enclosing_decl: str | None
    receiver_origin: str | None = None
    role: TypeRole | None = None
    scope: int | None = None  # index of the enclosing declaration in AstRoot.all_declarations
    confident: bool = True

    @property
    def head(self) -> str:
        return self.name_path[0]

    @property
    def name(self) -> str:
        return self.name_path[-1]


@dataclass
class LocalVar:
    """A local variable or parameter visible in a body.

    ``origin`` is the dotted call/access chain the variable was initialised from,
    ``created`` marks an initialiser that constructs ``origin`` (``JUser()``/``new JUser()``).
    """

    name: str
    type: TypeRef | None = None
    origin: tuple[str, ...] | None = None
    created: bool = False


@dataclass
class Declaration:
    kind: DeclKind
    name: str
    qualified_name: str
    range: SourceRange
    name_range: SourceRange
    modifiers: frozenset[str] = frozenset()
    annotations: list[AnnotationRef] = field(default_factory=list)
    params: list[Declaration] = field(default_factory=list)
    declared_type: TypeRef | None = None
    receiver_type: TypeRef | None = None
    supertypes: list[TypeRef] = field(default_factory=list)
    is_single_expression: bool = False
    has_explicit_return_type: bool = False
    is_constructor: bool = False
    has_initializer: bool = False
    in_interface: bool = False
    value_ref: Reference | None = None
    body_refs: list[Reference] = field(default_factory=list)
    locals: dict[str, LocalVar] = field(default_factory=dict)
    children: list[Declaration] = field(default_factory=list)
    parent: str | None = None
    index: int = -1

    @property
    def param_count(self) -> int:
        return len(self.params)

    @property
    def visibility(self) -> str:
        for vis in ("private", "protected", "internal", "public"):
            if vis in self.modifiers:
                return vis
        return "default"


@dataclass
class AstRoot:
    file: SourceFile
    package_name: str | None
    imports: list[ImportDecl]
    declarations: list[Declaration]
    file_annotations: list[AnnotationRef] = field(default_factory=list)
    references: list[Reference] = field(default_factory=list)
    all_declarations: list[Declaration] = field(default_factory=list)

    @property
    def path(self) -> str:
        return self.file.path

    @property
    def language(self):
        return self.file.language

    def qualify(self, name: str) -> str:
        return f"{self.package_name}.{name}" if self.package_name else name

    def scope_of(self, ref: Reference) -> Declaration | None:
        if ref.scope is None:
            return None
        return self.all_declarations[ref.scope]

    def jvm_facade_name(self) -> str:
        """Qualified name of the class Kotlin compiles this file's top-level members into."""
        for ann in self.file_annotations:
            if ann.simple_name == "JvmName":
                explicit = _annotation_string_arg(self.file.text, ann.range)
                if explicit:
                    return self.qualify(explicit)
        stem = self.file.path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
        return self.qualify(stem[:1].upper() + stem[1:] + "Kt")


def _annotation_string_arg(text: str, rng: SourceRange) -> str | None:
    rest = text[rng.end:rng.end + 200]
    if not rest.startswith("("):
        return None
    start = rest.find('"')
    end = rest.find('"', start + 1)
    if start < 0 or end < 0:
        return None
    return rest[start + 1:end]
