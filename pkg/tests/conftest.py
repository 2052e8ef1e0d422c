import json
from pathlib import Path

import pytest

from kjlint.source import SourceFile
from kjlint.syntax import parse_source

FIXTURES = Path(__file__).parent / "fixtures"
SMELL_FIXTURES = FIXTURES / "smells"


def parse(path: str, text: str):
    return parse_source(SourceFile(path, text))


def load_tree(root: Path):
    """Parse every source file under ``root``; paths are relative to it."""
    return [parse(p.relative_to(root).as_posix(), p.read_text(encoding="utf-8"))
            for p in sorted(root.rglob("*")) if p.suffix in (".kt", ".java")]


def triples(findings):
    return sorted((f.smell.value, f.file, f.range.line) for f in findings)


def expected_triples(entries):
    return sorted((e["smell"], e["file"], e["line"]) for e in entries)


def load_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


def all_fixture_sources():
    return sorted(p for p in FIXTURES.rglob("*") if p.suffix in (".kt", ".java"))


@pytest.fixture
def write_tree(tmp_path):
    def _write(files: dict[str, str]) -> Path:
        for rel, text in files.items():
            path = tmp_path / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        return tmp_path
    return _write


# Acceptance criteria outcomes, echoed once more at the end of the session.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
