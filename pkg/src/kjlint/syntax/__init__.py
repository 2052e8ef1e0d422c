"""Kotlin and Java front ends: source text to ASTs, declarations and references."""

from __future__ import annotations

from dataclasses import dataclass

from kjlint.source import Language, SourceFile
from kjlint.syntax.java import JavaFrontEnd
from kjlint.syntax.kotlin import KotlinFrontEnd
from kjlint.syntax.model import (
    AnnotationRef,
    AstRoot,
    Declaration,
    DeclKind,
    ImportDecl,
    ParseError,
    Reference,
    RefKind,
    TypeRef,
    TypeRole,
)

__all__ = [
    "AnnotationRef", "AstRoot", "Declaration", "DeclKind", "ImportDecl", "ParseError",
    "ParsedUnit", "Reference", "RefKind", "TypeRef", "TypeRole",
    "extract_declarations", "extract_references", "parse_source", "parse_unit",
]


def parse_source(file: SourceFile) -> AstRoot:
    """Parse one file; raises :class:`ParseError` on a structural failure."""
    front = KotlinFrontEnd(file) if file.language is Language.KOTLIN else JavaFrontEnd(file)
    return front.parse()


def extract_declarations(ast: AstRoot) -> list[Declaration]:
    """Pre-order, source-ordered list of every declaration (parameters are reached via ``params``)."""
    out: list[Declaration] = []

    def walk(decls: list[Declaration]) -> None:
        for decl in sorted(decls, key=lambda d: (d.range.start, d.index)):
            out.append(decl)
            walk(decl.children)

    walk(ast.declarations)
    return out


def extract_references(ast: AstRoot) -> list[Reference]:
    return sorted(ast.references, key=lambda r: (r.range.start, r.range.end, r.kind.value, r.name_path))


@dataclass(frozen=True)
class ParsedUnit:
    source: SourceFile
    ast: AstRoot
    decls: tuple[Declaration, ...]
    refs: tuple[Reference, ...]


def parse_unit(file: SourceFile) -> ParsedUnit:
    ast = parse_source(file)
    return ParsedUnit(file, ast, tuple(extract_declarations(ast)), tuple(extract_references(ast)))
