import pytest

from conftest import FIXTURES, load_json, load_tree, parse
from kjlint.entities import (
    Nullability,
    Via,
    build_symbol_index,
    nullability_of,
    resolve_reference,
)
from kjlint.source import Language
from kjlint.syntax import DeclKind, RefKind, extract_declarations

DEPS = FIXTURES / "deps"


def _index(files):
    asts = [parse(path, text) for path, text in files.items()]
    return build_symbol_index(asts), {a.path: a for a in asts}


def _ref(ast, kind, path):
    return next(r for r in ast.references if r.kind is kind and r.name_path == path)


def test_two_files_two_entities():
    index, _ = _index({"A.kt": "package p\nclass A", "B.java": "package p;\nclass B {}"})
    assert sorted(e.qualified_name for e in index.entities()) == ["p.A", "p.B"]
    assert index.lookup("p.A").language is Language.KOTLIN
    assert index.lookup("p.B").language is Language.JAVA


def test_empty_project():
    index = build_symbol_index([])
    assert len(index) == 0 and index.entities() == []


def test_duplicate_keeps_first_by_path():
    index, _ = _index({"b/C.kt": "package p\nclass C", "a/C.java": "package p;\nclass C {}"})
    assert index.lookup("p.C").file == "a/C.java"
    dups = [d for d in index.diagnostics if d.code == "DuplicateSymbol"]
    assert len(dups) == 1 and dups[0].path == "b/C.kt"


def test_maps_are_consistent():
    asts = load_tree(FIXTURES / "smells" / "InternalExposure" / "seeded")
    index = build_symbol_index(asts)
    for entity in index.entities():
        assert index.by_qualified_name[entity.qualified_name] is entity
        assert entity in index.by_simple_name[entity.name]
        assert entity in index.per_file[entity.file]


def test_index_totality():
    asts = load_tree(DEPS)
    index = build_symbol_index(asts)
    declared = sum(len(extract_declarations(a)) + sum(len(d.params) for d in extract_declarations(a))
                   for a in asts)
    dropped = sum(1 for d in index.diagnostics if d.code in ("DuplicateSymbol", "OverloadCollapsed"))
    assert len(index.entities()) == declared - dropped


def test_java_entities_are_never_internal():
    for root in (DEPS, FIXTURES / "one_each", FIXTURES / "mixed"):
        for entity in build_symbol_index(load_tree(root)).entities():
            if entity.language is Language.JAVA:
                assert entity.visibility != "internal"


def test_explicit_import_cross_language():
    index, files = _index({
        "jlib/JUser.java": "package jlib;\npublic class JUser {}",
        "app/U.kt": "package app\nimport jlib.JUser\nfun f() {\n    val u = JUser()\n}",
    })
    ast = files["app/U.kt"]
    target = resolve_reference(index, _ref(ast, RefKind.OBJECT_CREATION, ("JUser",)), ast)
    assert target.entity.qualified_name == "jlib.JUser"
    assert target.via is Via.EXPLICIT_IMPORT and target.cross_language


def test_external_names_are_unresolved():
    index, files = _index({"A.java": "import java.util.ArrayList;\nclass A { Object o = new ArrayList(); }"})
    ast = files["A.java"]
    assert resolve_reference(index, _ref(ast, RefKind.IMPORT_USE, ("java", "util", "ArrayList")), ast) is None


def test_local_type_resolves_member():
    index, files = _index({
        "jlib/JUser.java": "package jlib;\npublic class JUser { public String getName() { return null; } }",
        "app/U.kt": "package app\nimport jlib.JUser\nfun f(u: JUser) {\n    u.getName()\n}",
    })
    ast = files["app/U.kt"]
    target = resolve_reference(index, _ref(ast, RefKind.CALL, ("u", "getName")), ast)
    assert target.entity.qualified_name == "jlib.JUser.getName"


@pytest.mark.parametrize("files, via", [
    ({"q/T.java": "package q;\npublic class T {}", "p/T.java": "package p;\npublic class T {}",
      "p/U.kt": "package p\nimport q.T\nval t = T()"}, ("q.T", Via.EXPLICIT_IMPORT)),
    ({"q/T.java": "package q;\npublic class T {}", "p/T.java": "package p;\npublic class T {}",
      "p/U.kt": "package p\nimport q.*\nval t = T()"}, ("p.T", Via.SAME_PACKAGE)),
    ({"q/T.java": "package q;\npublic class T {}",
      "p/U.kt": "package p\nimport q.*\nval t = T()"}, ("q.T", Via.WILDCARD_IMPORT)),
    ({"q/T.java": "package q;\npublic class T {}",
      "p/U.kt": "package p\nval t = q.T()"}, ("q.T", Via.QUALIFIED_NAME)),
])
def test_resolution_order(files, via):
    index, asts = _index(files)
    ast = asts["p/U.kt"]
    ref = next(r for r in ast.references if r.name == "T" and r.kind is not RefKind.IMPORT_USE)
    target = resolve_reference(index, ref, ast)
    assert (target.entity.qualified_name, target.via) == via


def test_kotlin_top_level_function_via_file_facade():
    index, files = _index({
        "app/Items.kt": "package app\nfun items(): List<String> = listOf()",
        "j/C.java": "package j;\nimport app.ItemsKt;\nclass C { void m() { ItemsKt.items(); } }",
    })
    ast = files["j/C.java"]
    target = resolve_reference(index, _ref(ast, RefKind.CALL, ("ItemsKt", "items")), ast)
    assert target.entity.qualified_name == "app.items" and target.cross_language


# ---------------------------------------------------------------- nullability

NULL_SRC = """package j;
import org.jetbrains.annotations.Nullable;
import org.jetbrains.annotations.NotNull;
public class U {
    @Nullable public String a() { return null; }
    @NotNull public String b() { return ""; }
    public String c() { return ""; }
    @javax.annotation.CheckForNull public String d() { return null; }
    @com.other.Nullable public String e() { return null; }
    public String f;
}
"""


@pytest.mark.parametrize("name, status", [
    ("j.U.a", Nullability.ANNOTATED_NULLABLE),
    ("j.U.b", Nullability.ANNOTATED_NOT_NULL),
    ("j.U.c", Nullability.UNANNOTATED),
    ("j.U.d", Nullability.ANNOTATED_NULLABLE),
    ("j.U.e", Nullability.UNANNOTATED),
    ("j.U.f", Nullability.UNANNOTATED),
    ("j.U", Nullability.NOT_APPLICABLE),
])
def test_java_nullability(name, status):
    index, _ = _index({"j/U.java": NULL_SRC})
    assert nullability_of(index.lookup(name)) is status


def test_kotlin_is_not_applicable():
    index, _ = _index({"K.kt": "package k\nfun f(): String? = null"})
    entity = index.lookup("k.f")
    assert entity.kind is DeclKind.FUNCTION
    assert nullability_of(entity) is Nullability.NOT_APPLICABLE
    assert entity.nullability is Nullability.NOT_APPLICABLE


def test_nullability_sets_are_configurable():
    index, _ = _index({"j/U.java": NULL_SRC})
    assert nullability_of(index.lookup("j.U.c"), {"Nullable"}, {"NotNull"}) is Nullability.UNANNOTATED
    assert nullability_of(index.lookup("j.U.a"), {"Maybe"}, {"NotNull"}) is Nullability.UNANNOTATED


# ---------------------------------------------------------------- ground truth

def test_resolution_matches_hand_written_table():
    """Every confident reference of the deps fixture resolves as the manual table says."""
    asts = load_tree(DEPS)
    index = build_symbol_index(asts)
    table = {(r["file"], r["line"], r["col"], r["kind"], r["path"]): r["target"]
             for r in load_json(DEPS / "expected_resolution.json")}
    seen = {}
    for ast in asts:
        for ref in ast.references:
            if ref.confident:
                target = resolve_reference(index, ref, ast)
                key = (ast.path, ref.range.line, ref.range.col, ref.kind.value, ".".join(ref.name_path))
                seen[key] = target.entity.qualified_name if target else None
    assert seen == table


def test_resolution_is_pure():
    asts = load_tree(DEPS)
    index = build_symbol_index(asts)
    for ast in asts:
        for ref in ast.references:
            assert resolve_reference(index, ref, ast) == resolve_reference(index, ref, ast)
