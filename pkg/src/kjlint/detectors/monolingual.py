"""Single-file detectors: unused imports, long parameter lists, implicit return types."""

from __future__ import annotations

from collections.abc import Iterable

from kjlint.detectors.config import DetectorConfig
from kjlint.detectors.findings import Finding, Smell
from kjlint.source import Language
from kjlint.syntax import extract_declarations
from kjlint.syntax.model import AstRoot, Declaration, DeclKind, Reference, RefKind


def used_names(ast: AstRoot, refs: Iterable[Reference] | None = None) -> set[str]:
    """Names that count as a use of an import.

    Java uses are path heads. Kotlin also counts later path segments, since an
    imported extension function is only ever written after a receiver.
    """
    refs = ast.references if refs is None else refs
    names: set[str] = set()
    kotlin = ast.language is Language.KOTLIN
    for ref in refs:
        if ref.kind is RefKind.IMPORT_USE:
            continue
        if kotlin:
            names.update(ref.name_path)
        else:
            names.add(ref.head)
    return names


def detect_unused_imports(ast: AstRoot, refs: Iterable[Reference] | None = None,
                          cfg: DetectorConfig | None = None) -> list[Finding]:
    cfg = cfg or DetectorConfig()
    used = used_names(ast, refs)
    out = []
    for imp in ast.imports:
        name = imp.visible_name
        if name is None or name in used:
            continue
        out.append(Finding(
            smell=Smell.UNUSED_IMPORT,
            severity=cfg.severity(Smell.UNUSED_IMPORT),
            file=ast.path,
            range=imp.range,
            message=f"import '{imp.target}' is never used",
            entities=(imp.target,),
        ))
    return out


def detect_excessive_params(ast: AstRoot, cfg: DetectorConfig | None = None,
                            decls: Iterable[Declaration] | None = None) -> list[Finding]:
    cfg = cfg or DetectorConfig()
    decls = extract_declarations(ast) if decls is None else decls
    out = []
    for decl in decls:
        if decl.kind is not DeclKind.FUNCTION or decl.param_count <= cfg.max_params:
            continue
        what = "constructor" if decl.is_constructor else "function"
        out.append(Finding(
            smell=Smell.EXCESSIVE_PARAMS,
            severity=cfg.severity(Smell.EXCESSIVE_PARAMS),
            file=ast.path,
            range=decl.name_range,
            message=f"{what} '{decl.name}' declares {decl.param_count} parameters "
                    f"(limit {cfg.max_params})",
            entities=(decl.qualified_name,),
        ))
    return out


def detect_implicit_single_expr(ast: AstRoot, cfg: DetectorConfig | None = None,
                                decls: Iterable[Declaration] | None = None) -> list[Finding]:
    cfg = cfg or DetectorConfig()
    if ast.language is not Language.KOTLIN:
        return []
    decls = extract_declarations(ast) if decls is None else decls
    out = []
    for decl in decls:
        if decl.kind is not DeclKind.FUNCTION or not decl.is_single_expression:
            continue
        if decl.has_explicit_return_type or decl.visibility == "private":
            continue
        out.append(Finding(
            smell=Smell.IMPLICIT_SINGLE_EXPR,
            severity=cfg.severity(Smell.IMPLICIT_SINGLE_EXPR),
            file=ast.path,
            range=decl.name_range,
            message=f"single-expression function '{decl.name}' has no declared return type",
            entities=(decl.qualified_name,),
        ))
    return out
