import os

import pytest

from conftest import FIXTURES, SMELL_FIXTURES, expected_triples, load_json, triples
from kjlint.detectors import DetectorConfig, Smell
from kjlint.pipeline import (
    REGISTRY,
    AnalysisContext,
    NoSourcesFound,
    ProcessorDescriptor,
    StageClosed,
    compute_stats,
    construction_counts,
    discover_sources,
    run_analysis,
    select_processors,
)
from kjlint.source import Language

KOTLIN, JAVA = Language.KOTLIN, Language.JAVA
STAGE3 = {d.id for d in REGISTRY if d.stage == 3}


# ---------------------------------------------------------------- selection

def _ids(languages, cfg=None):
    return [d.id for d in select_processors(REGISTRY, languages, cfg)]


def test_kotlin_only_has_no_stage3():
    assert _ids({KOTLIN}) == ["excessive-params", "implicit-single-expr", "unused-import",
                              "circular-references"]


def test_both_languages_load_every_detector():
    ids = _ids({KOTLIN, JAVA})
    assert len([d for d in select_processors(REGISTRY, {KOTLIN, JAVA}) if d.smell]) == len(Smell)
    assert STAGE3 <= set(ids) and "interop-hints" in ids


def test_java_only_skips_kotlin_specific():
    assert "implicit-single-expr" not in _ids({JAVA})


def test_selection_is_sorted_by_stage_then_id():
    selected = select_processors(REGISTRY, {KOTLIN, JAVA})
    assert [(d.stage, d.id) for d in selected] == sorted((d.stage, d.id) for d in selected)


def test_disabled_smell_is_not_selected():
    cfg = DetectorConfig(enabled={s: False for s in Smell if s.value != "UnusedImport"})
    assert _ids({KOTLIN, JAVA}, cfg) == ["unused-import"]


def test_empty_registry_rejected():
    with pytest.raises(ValueError):
        select_processors([], {KOTLIN})


def test_stage3_descriptor_needs_two_languages():
    with pytest.raises(ValueError):
        ProcessorDescriptor("x", 3, frozenset({KOTLIN}), (), (), lambda c, b: None)


# ---------------------------------------------------------------- context

def test_context_put_take_and_close():
    ctx = AnalysisContext(frozenset({KOTLIN}), DetectorConfig())
    ctx.put(1, "hints.x", [1])
    assert ctx.take(1, "hints.x") == [1]
    assert ctx.take(1, "hints.x") is None
    ctx.close_stage(1)
    with pytest.raises(StageClosed):
        ctx.put(1, "hints.y", 1)
    ctx.put(2, "ok", 1)


def test_clear_hints_keeps_other_keys():
    ctx = AnalysisContext(frozenset({KOTLIN}), DetectorConfig())
    ctx.put(1, "hints.a", 1)
    ctx.put(1, "other", 2)
    ctx.clear_hints()
    assert ctx.store == {(1, "other"): 2}


# ---------------------------------------------------------------- runs

def test_empty_directory(tmp_path):
    with pytest.raises(NoSourcesFound):
        run_analysis(tmp_path, ["kotlin"])


def test_missing_root(tmp_path):
    with pytest.raises(FileNotFoundError):
        run_analysis(tmp_path / "nope", ["kotlin"])


def test_single_file_root(write_tree):
    root = write_tree({"A.kt": "fun f(x: Int) = x"})
    result = run_analysis(root / "A.kt", ["kotlin"])
    assert triples(result.findings) == [("ImplicitSingleExprFunction", "A.kt", 1)]


def test_one_of_each_smell():
    expected = load_json(FIXTURES / "one_each" / "expected.json")
    result = run_analysis(FIXTURES / "one_each", ["kotlin", "java"])
    assert triples(result.findings) == expected_triples(expected["findings"])
    assert {s.value: n for s, n in result.per_smell.items()} == {s.value: 1 for s in Smell}
    assert {s.value: n for s, n in result.files_affected.items()} == expected["filesAffected"]


@pytest.mark.parametrize("key, languages", [("both", ["kotlin", "java"]), ("kotlinOnly", ["kotlin"])])
def test_mixed_fixture(key, languages):
    result = run_analysis(FIXTURES / "mixed", languages)
    assert triples(result.findings) == expected_triples(load_json(FIXTURES / "mixed" / "expected.json")[key])


@pytest.mark.parametrize("smell_dir", sorted(SMELL_FIXTURES.iterdir()), ids=lambda p: p.name)
@pytest.mark.parametrize("twin", ["seeded", "clean"])
def test_smell_fixtures(smell_dir, twin):
    root = smell_dir / twin
    result = run_analysis(root, ["kotlin", "java"])
    assert triples(result.findings) == expected_triples(load_json(root / "expected.json"))
    assert result.skipped_files == []


def test_stage3_processors_never_constructed_in_single_language_run():
    before = construction_counts.copy()
    result = run_analysis(FIXTURES / "mixed", ["kotlin"])
    built = construction_counts - before
    assert not STAGE3 & set(built) and "interop-hints" not in built
    assert {"unused-import", "circular-references"} <= set(built)
    assert not any(f.smell.value in ("PlatformType", "ImmutableCollectionMutation", "InternalExposure",
                                     "KotlinJvmAnnotationInJava") for f in result.findings)


def test_stages_run_in_order_and_hints_are_cleared():
    result = run_analysis(FIXTURES / "one_each", ["kotlin", "java"])
    stages = [stage for stage, _ in result.context.trace]
    assert stages == sorted(stages) and set(stages) == {1, 2, 3}
    assert result.context.closed_stages == {1, 2, 3}
    assert not any(key.startswith("hints.") for _, key in result.context.store)


def test_parse_error_is_skipped(write_tree):
    root = write_tree({"ok/A.kt": "fun f(x: Int) = x", "bad/B.java": "class {"})
    result = run_analysis(root, ["kotlin", "java"])
    assert [p for p, _ in result.skipped_files] == ["bad/B.java"]
    assert result.files_analyzed == 1 and len(result.findings) == 1


def test_discovery_skips_hidden_and_build_dirs(write_tree):
    root = write_tree({f"{d}/X.kt": "class X" for d in (".git", "build", "out", "target", "src")})
    assert [p.relative_to(root).as_posix() for p in discover_sources(root, {KOTLIN})] == ["src/X.kt"]


def test_discovery_ignores_symlinks(write_tree):
    root = write_tree({"a/A.kt": "class A"})
    os.symlink(root / "a" / "A.kt", root / "a" / "Link.kt")
    os.symlink(root / "a", root / "loop")
    assert [p.name for p in discover_sources(root, {KOTLIN})] == ["A.kt"]


def test_discovery_filters_language(write_tree):
    root = write_tree({"A.kt": "class A", "B.java": "class B {}"})
    assert [p.name for p in discover_sources(root, {JAVA})] == ["B.java"]


def test_failing_processor_becomes_diagnostic(write_tree):
    def broken(ctx, bus):
        class Broken:
            def attach(self):
                bus.subscribe("source.parsed", lambda m: 1 / 0)
        construction_counts["broken"] += 1
        return Broken()

    registry = REGISTRY + (ProcessorDescriptor("broken", 1, frozenset(), (), (), broken),)
    result = run_analysis(write_tree({"A.kt": "fun f(x: Int) = x"}), ["kotlin"], registry=registry)
    assert len(result.findings) == 1
    assert [d.code for d in result.diagnostics if d.code == "ProcessorFailed"] == ["ProcessorFailed"]


def test_compute_stats_counts_related_files():
    result = run_analysis(FIXTURES / "one_each", ["kotlin", "java"])
    per, affected = compute_stats(result.findings, list(Smell))
    assert per == result.per_smell and affected == result.files_affected


def test_runs_are_deterministic():
    a = run_analysis(FIXTURES, ["kotlin", "java"])
    b = run_analysis(FIXTURES, ["kotlin", "java"])
    assert a.findings == b.findings and a.graph.edges == b.graph.edges

