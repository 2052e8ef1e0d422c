import json
from importlib import resources

import jsonschema
import pytest

from conftest import FIXTURES, load_json, load_tree, parse
from kjlint.dependencies import (
    DependencyGraph,
    DependencyType,
    classify_edge,
    export_graph_json,
    extract_dependencies,
    graph_from_json,
)
from kjlint.entities import build_symbol_index, resolve_reference
from kjlint.source import Language, SourceRange
from kjlint.syntax import Reference, RefKind, TypeRole

DEPS = FIXTURES / "deps"
GRAPH_SCHEMA = json.loads(resources.files("kjlint").joinpath("schemas/graph.schema.json").read_text())
EDGE_KEYS = ("from", "line", "col", "type", "to", "fromEntity", "toEntity", "crossLanguage")


def _graph(files):
    asts = [parse(path, text) for path, text in files.items()]
    index = build_symbol_index(asts)
    return extract_dependencies(index, asts), index, {a.path: a for a in asts}


def _types(graph):
    return sorted(e.dep_type.value for e in graph.edges)


def test_kotlin_property_typed_with_java_class_is_pt():
    graph, _, _ = _graph({"j/JUser.java": "package j;\npublic class JUser {}",
                          "k/A.kt": "package k\nimport j.JUser\nclass A { lateinit var u: JUser }"})
    assert _types(graph) == ["Import", "PT"]


def test_kotlin_extension_on_java_class():
    graph, _, _ = _graph({"j/JUser.java": "package j;\npublic class JUser {}",
                          "k/E.kt": "package k\nimport j.JUser\nfun JUser.pretty() = 1"})
    assert _types(graph) == ["Extension", "Import"]


def test_java_creates_kotlin_object():
    graph, _, _ = _graph({"k/KWidget.kt": "package k\nclass KWidget",
                          "j/C.java": "package j;\nclass C { Object m() { return new k.KWidget(); } }"})
    assert _types(graph) == ["Create"]
    assert graph.edges[0].cross_language


def test_kotlin_calls_java_method_once():
    graph, _, _ = _graph({"B.java": "public class B { public static int m() { return 1; } }",
                          "A.kt": "fun a(): Int = B.m()"})
    calls = [e for e in graph.edges if e.dep_type is DependencyType.CALL]
    assert len(calls) == 1 and calls[0].cross_language
    assert (calls[0].from_file, calls[0].to_file, calls[0].to_entity) == ("A.kt", "B.java", "B.m")


def test_no_cross_file_references():
    graph, _, _ = _graph({"A.kt": "class A", "B.java": "class B {}"})
    assert graph.edges == [] and set(graph.nodes) == {"A.kt", "B.java"}


def test_implicit_property_type_gives_create_not_pt():
    graph, _, _ = _graph({"j/JUser.java": "package j;\npublic class JUser {}",
                          "k/A.kt": "package k\nimport j.JUser\nval u = JUser()"})
    assert _types(graph) == ["Create", "Import"]


def test_import_edge_even_when_unused():
    graph, _, _ = _graph({"j/JUser.java": "package j;\npublic class JUser {}",
                          "k/A.kt": "package k\nimport j.JUser\nclass A"})
    assert _types(graph) == ["Import"]


def test_java_never_emits_pt_or_extension():
    graph, _, _ = _graph({"k/K.kt": "package k\nclass K",
                          "j/C.java": "package j;\nimport k.K;\nclass C { K field; K m(K p) { K l = p; return l; } }"})
    types = set(_types(graph))
    assert "PT" not in types and "Extension" not in types
    assert {"Import", "Parameter", "Return", "LVT"} <= types


@pytest.mark.parametrize("kind, role, target_kind, expected", [
    (RefKind.SUPER_TYPE, None, "interface", DependencyType.IMPLEMENT),
    (RefKind.SUPER_TYPE, None, "class", DependencyType.EXTEND),
    (RefKind.TYPE_USE, TypeRole.PARAMETER, "class", DependencyType.PARAMETER),
    (RefKind.TYPE_USE, TypeRole.RETURN, "class", DependencyType.RETURN),
    (RefKind.TYPE_USE, TypeRole.LOCAL, "class", DependencyType.LVT),
    (RefKind.TYPE_USE, TypeRole.GENERIC, "class", None),
    (RefKind.ANNOTATION_USE, None, "class", None),
])
def test_classify_edge(kind, role, target_kind, expected):
    src = "package j;\npublic interface I {}" if target_kind == "interface" else "package j;\npublic class I {}"
    _, index, _ = _graph({"j/I.java": src})
    ref = Reference(kind, ("I",), SourceRange(0, 1, 1, 1, 1, 2), None, role=role)
    assert classify_edge(ref, index.lookup("j.I"), Language.KOTLIN) is expected


# ---------------------------------------------------------------- ground truth

def _deps_graph():
    asts = load_tree(DEPS)
    return extract_dependencies(build_symbol_index(asts), asts)


def test_edges_match_hand_written_list():
    graph = _deps_graph()
    got = sorted(json.dumps({k: e.to_json()[k] for k in EDGE_KEYS}, sort_keys=True) for e in graph.edges)
    expected = sorted(json.dumps(e, sort_keys=True) for e in load_json(DEPS / "expected_edges.json"))
    assert got == expected


def test_all_eleven_types_present():
    graph = _deps_graph()
    assert {e.dep_type for e in graph.edges} == set(DependencyType)
    assert len(DependencyType) == 11


def test_pt_and_extension_only_kotlin_to_java():
    for root in (DEPS, FIXTURES / "one_each", FIXTURES / "mixed"):
        asts = load_tree(root)
        graph = extract_dependencies(build_symbol_index(asts), asts)
        for e in graph.edges:
            if e.dep_type in (DependencyType.PT, DependencyType.EXTENSION):
                assert graph.nodes[e.from_file] is Language.KOTLIN
                assert graph.nodes[e.to_file] is Language.JAVA


def test_edge_invariants():
    asts = load_tree(DEPS)
    by_path = {a.path: a for a in asts}
    graph = extract_dependencies(build_symbol_index(asts), asts)
    for e in graph.edges:
        assert e.from_file in graph.nodes and e.to_file in graph.nodes
        assert e.cross_language == (graph.nodes[e.from_file] is not graph.nodes[e.to_file])
        text = by_path[e.from_file].file.text
        assert e.location.end <= len(text)
    keys = [e.sort_key() for e in graph.edges]
    assert keys == sorted(keys)


def test_adjacency_is_projection_of_edges():
    graph = _deps_graph()
    projected = {n: set() for n in graph.nodes}
    for e in graph.edges:
        projected[e.from_file].add(e.to_file)
    assert graph.adjacency == {n: sorted(t) for n, t in sorted(projected.items())}


def test_every_edge_comes_from_a_resolved_reference():
    asts = load_tree(DEPS)
    index = build_symbol_index(asts)
    graph = extract_dependencies(index, asts)
    resolved = set()
    for ast in asts:
        for ref in ast.references:
            target = resolve_reference(index, ref, ast) if ref.confident else None
            if target is not None:
                resolved.add((ast.path, ref.range, target.entity.qualified_name))
    assert all((e.from_file, e.location, e.to_entity) in resolved for e in graph.edges)


# ---------------------------------------------------------------- export

def test_empty_graph_export():
    assert json.loads(export_graph_json(DependencyGraph())) == {"schemaVersion": 1, "nodes": [], "edges": []}


def test_one_edge_export():
    graph, _, _ = _graph({"B.java": "public class B { public static int m() { return 1; } }",
                          "A.kt": "fun a(): Int = B.m()"})
    (edge,) = json.loads(export_graph_json(graph))["edges"]
    assert {"from": "A.kt", "to": "B.java", "type": "Call", "line": 1}.items() <= edge.items()


def test_export_round_trip_and_schema():
    data = export_graph_json(_deps_graph())
    jsonschema.validate(json.loads(data), GRAPH_SCHEMA)
    assert export_graph_json(graph_from_json(data)) == data
    assert export_graph_json(_deps_graph()) == data
