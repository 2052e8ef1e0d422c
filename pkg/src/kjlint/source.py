"""Source files, languages and text ranges."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path, PurePosixPath


class Language(str, Enum):
    KOTLIN = "kotlin"
    JAVA = "java"

    @classmethod
    def from_path(cls, path: str | Path) -> Language | None:
        suffix = PurePosixPath(str(path)).suffix
        return _EXTENSIONS.get(suffix)

    @classmethod
    def parse(cls, name: str) -> Language:
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unsupported language: {name!r}") from None


# Case-sensitive on purpose: `.KT` and `.Java` are not picked up.
_EXTENSIONS = {".kt": Language.KOTLIN, ".java": Language.JAVA}


class SourceError(Exception):
    """A file could not be turned into a SourceFile (bad extension, bad encoding)."""


@dataclass(frozen=True, order=True)
class SourceRange:
    """Half-open character span ``[start, end)`` with 1-based line/column of both ends."""

    start: int
    end: int
    line: int
    col: int
    end_line: int
    end_col: int

    def contains(self, other: SourceRange) -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass(frozen=True)
class SourceFile:
    path: str
    text: str
    language: Language = field(init=False)
    line_index: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        language = Language.from_path(self.path)
        if language is None:
            raise SourceError(f"{self.path}: not a .kt or .java file")
        object.__setattr__(self, "language", language)
        starts = [0]
        for i, ch in enumerate(self.text):
            if ch == "\n":
                starts.append(i + 1)
        object.__setattr__(self, "line_index", tuple(starts))

    @classmethod
    def from_bytes(cls, path: str, data: bytes) -> SourceFile:
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SourceError(f"{path}: not valid UTF-8 (byte {exc.start})") from None
        if text.startswith("﻿"):
            text = text[1:]
        return cls(path, text)

    def position(self, offset: int) -> tuple[int, int]:
        """1-based (line, column) of a character offset."""
        line = bisect.bisect_right(self.line_index, offset) - 1
        return line + 1, offset - self.line_index[line] + 1

    def span(self, start: int, end: int) -> SourceRange:
        line, col = self.position(start)
        end_line, end_col = self.position(end)
        return SourceRange(start, end, line, col, end_line, end_col)

    def slice(self, rng: SourceRange) -> str:
        return self.text[rng.start:rng.end]

    def full_range(self) -> SourceRange:
        return self.span(0, len(self.text))
