from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from conftest import FIXTURES, all_fixture_sources, parse
from kjlint.source import Language, SourceError, SourceFile
from kjlint.syntax import (
    DeclKind,
    ParseError,
    RefKind,
    TypeRole,
    extract_declarations,
    extract_references,
    parse_source,
    parse_unit,
)
from oracles import top_level_headers


# ---------------------------------------------------------------- source files

@pytest.mark.parametrize("path, language", [
    ("A.kt", Language.KOTLIN),
    ("dir/B.java", Language.JAVA),
])
def test_language_from_extension(path, language):
    assert SourceFile(path, "").language is language


@pytest.mark.parametrize("path", ["A.KT", "B.Java", "script.kts", "README"])
def test_other_extensions_rejected(path):
    with pytest.raises(SourceError):
        SourceFile(path, "")


def test_non_utf8_rejected():
    with pytest.raises(SourceError, match="UTF-8"):
        SourceFile.from_bytes("A.kt", b"fun f() = \xff")


@given(st.text(alphabet=st.sampled_from("ab\n \t{}"), max_size=200))
def test_line_index_starts_at_zero_and_increases(text):
    index = SourceFile("A.kt", text).line_index
    assert index[0] == 0
    assert all(a < b for a, b in zip(index, index[1:]))
    assert len(index) == text.count("\n") + 1


def test_position_is_one_based():
    f = SourceFile("A.kt", "ab\ncd")
    assert f.position(0) == (1, 1)
    assert f.position(4) == (2, 2)


# ---------------------------------------------------------------- parse_source examples

def test_java_import_and_class():
    ast = parse("A.java", "import java.util.List; class A {}")
    assert [i.target for i in ast.imports] == ["java.util.List"]
    assert [(d.kind, d.name) for d in ast.declarations] == [(DeclKind.CLASS, "A")]


def test_kotlin_single_expression_function():
    ast = parse("F.kt", "fun f(x: Int) = x + 1")
    (f,) = ast.declarations
    assert f.kind is DeclKind.FUNCTION and f.name == "f"
    assert f.is_single_expression and not f.has_explicit_return_type
    assert [p.name for p in f.params] == ["x"]


def test_java_missing_class_name():
    with pytest.raises(ParseError) as err:
        parse("B.java", "class {")
    assert err.value.line == 1
    assert "class name" in str(err.value)


@pytest.mark.parametrize("path, text", [
    ("A.java", "class A {"),
    ("A.java", "int x;"),
    ("A.kt", "class A {"),
    ("A.kt", "fun f( {"),
    ("A.kt", "}"),
])
def test_structural_failures_raise(path, text):
    with pytest.raises(ParseError):
        parse(path, text)


# ---------------------------------------------------------------- declarations

def test_declarations_are_qualified_in_preorder():
    ast = parse("A.kt", "package p\nclass A { fun b() {} }")
    assert [(d.qualified_name, d.kind) for d in extract_declarations(ast)] == [
        ("p.A", DeclKind.CLASS), ("p.A.b", DeclKind.FUNCTION)]


@pytest.mark.parametrize("path", ["E.kt", "E.java"])
def test_empty_file_has_no_declarations(path):
    assert extract_declarations(parse(path, "")) == []


def test_internal_modifier_is_kept():
    (decl,) = extract_declarations(parse("S.kt", "internal class Secret"))
    assert decl.name == "Secret" and "internal" in decl.modifiers


def test_java_declaration_kinds():
    text = """package p;
public class C {
    private int a, b;
    public C(int a) { this.a = a; }
    public static String name(String s, int n) { return s; }
    interface I { void run(); }
    enum Color { RED, GREEN }
}
"""
    decls = {d.qualified_name: d for d in extract_declarations(parse("C.java", text))}
    assert decls["p.C.a"].kind is DeclKind.FIELD and decls["p.C.b"].kind is DeclKind.FIELD
    assert decls["p.C.C"].is_constructor and decls["p.C.C"].param_count == 1
    assert decls["p.C.name"].param_count == 2 and decls["p.C.name"].declared_type.name == "String"
    assert decls["p.C.I"].kind is DeclKind.INTERFACE
    assert decls["p.C.Color"].kind is DeclKind.ENUM
    assert decls["p.C.Color.RED"].kind is DeclKind.FIELD


def test_kotlin_declaration_kinds():
    text = """package p
data class D(val a: Int, var b: String = "x", c: Long)
object O { const val K = 1 }
interface I { fun f(): Int }
enum class E { A, B }
class W { companion object { fun make() = W() } }
val top: Int get() = 1
fun String.ext(): Int = length
"""
    decls = {d.qualified_name: d for d in extract_declarations(parse("D.kt", text))}
    assert decls["p.D"].kind is DeclKind.CLASS
    assert decls["p.D.a"].kind is DeclKind.PROPERTY and decls["p.D.b"].kind is DeclKind.PROPERTY
    assert "p.D.c" not in decls  # plain constructor parameter, not a property
    ctor = decls["p.D.D"]
    assert ctor.is_constructor and ctor.param_count == 3
    assert decls["p.O"].kind is DeclKind.OBJECT and decls["p.O.K"].kind is DeclKind.PROPERTY
    assert decls["p.I"].kind is DeclKind.INTERFACE
    assert decls["p.E"].kind is DeclKind.ENUM
    assert decls["p.W.Companion"].kind is DeclKind.OBJECT
    assert decls["p.W.Companion.make"].is_single_expression
    assert decls["p.top"].kind is DeclKind.PROPERTY
    assert decls["p.ext"].receiver_type.name == "String"


def test_kotlin_default_values_count_as_parameters():
    (f,) = parse("F.kt", "fun f(a: Int = 1, b: Int = 2) {}").declarations
    assert f.param_count == 2


def test_nested_ranges_are_contained():
    for path in all_fixture_sources():
        ast = parse(path.name, path.read_text())

        def walk(decls, parent=None):
            for d in decls:
                assert 0 <= d.range.start <= d.range.end <= len(ast.file.text)
                if parent is not None:
                    assert parent.range.contains(d.range), (path, d.qualified_name)
                walk(d.children, d)

        walk(ast.declarations)


def test_only_kotlin_functions_are_single_expression():
    for path in all_fixture_sources():
        for d in extract_declarations(parse(path.name, path.read_text())):
            if d.is_single_expression:
                assert path.suffix == ".kt" and d.kind is DeclKind.FUNCTION
            if d.kind is not DeclKind.FUNCTION:
                assert d.params == []


# ---------------------------------------------------------------- references

def test_java_receiver_origin_one_hop():
    text = """class U {
    void m() {
        List l = KUtilKt.items();
        l.add(x);
    }
}"""
    refs = extract_references(parse("U.java", text))
    add = [r for r in refs if r.kind is RefKind.CALL and r.name_path == ("l", "add")]
    assert len(add) == 1 and add[0].receiver_origin == "KUtilKt.items"


def test_kotlin_object_creation():
    refs = extract_references(parse("K.kt", "fun f() {\n    val u = JUser()\n}"))
    assert any(r.kind is RefKind.OBJECT_CREATION and r.name_path == ("JUser",) for r in refs)


def test_java_annotation_use():
    refs = extract_references(parse("A.java", "class A {\n    @JvmStatic void m() {}\n}"))
    assert [r.name_path for r in refs if r.kind is RefKind.ANNOTATION_USE] == [("JvmStatic",)]


def test_type_roles():
    text = """package p
import q.T
class C(val prop: T) {
    fun f(a: T): T {
        val loc: T = a
        return loc
    }
}
fun T.ext() {}
"""
    roles = {r.role for r in extract_references(parse("C.kt", text))
             if r.kind is RefKind.TYPE_USE and r.name_path == ("T",)}
    assert roles == {TypeRole.PROPERTY, TypeRole.PARAMETER, TypeRole.RETURN, TypeRole.LOCAL,
                     TypeRole.RECEIVER}


def test_references_are_sorted_and_nonempty():
    for path in all_fixture_sources():
        refs = extract_references(parse(path.name, path.read_text()))
        assert all(r.name_path for r in refs)
        assert refs == sorted(refs, key=lambda r: (r.range.start, r.range.end, r.kind.value, r.name_path))


def test_reference_ranges_contain_their_name():
    for path in all_fixture_sources():
        ast = parse(path.name, path.read_text())
        for ref in ast.references:
            text = ast.file.slice(ref.range)
            assert ref.head in text or ref.kind is RefKind.OBJECT_CREATION and ref.name in text, \
                (path, ref)


def test_declaration_name_ranges_slice_to_name():
    for path in all_fixture_sources():
        ast = parse(path.name, path.read_text())
        for d in extract_declarations(ast):
            if d.is_constructor and path.suffix == ".kt":
                continue  # a primary constructor is anchored on its class name
            assert ast.file.slice(d.name_range) == d.name.strip("`"), (path, d.qualified_name)


# ---------------------------------------------------------------- properties

@pytest.mark.parametrize("path", all_fixture_sources(), ids=lambda p: str(p.relative_to(FIXTURES)))
def test_parsing_is_deterministic(path):
    text = path.read_text()
    a, b = parse_unit(SourceFile(path.name, text)), parse_unit(SourceFile(path.name, text))
    assert a.decls == b.decls and a.refs == b.refs


@pytest.mark.parametrize("path", all_fixture_sources(), ids=lambda p: str(p.relative_to(FIXTURES)))
def test_top_level_count_matches_token_scan(path):
    text = path.read_text()
    ast = parse_source(SourceFile(path.name, text))
    assert len(ast.declarations) == top_level_headers(text, path.suffix == ".kt")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([
    "fun a() = 1", "class B", "object C { fun d() {} }", "val e = 2", "interface F",
    "enum class G { X, Y }", "fun String.h(): Int = length", "private fun i() {}",
]), max_size=6))
def test_generated_kotlin_top_level_count(lines):
    text = "package gen\n\n" + "\n".join(lines) + "\n"
    ast = parse("Gen.kt", text)
    assert len(ast.declarations) == top_level_headers(text, True) == len(lines)
