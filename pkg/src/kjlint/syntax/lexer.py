"""Tokenizer for the Kotlin and Java subsets.

Comments are dropped. Kotlin string templates are lexed recursively: the
tokens of ``${...}`` and ``$name`` parts hang off the string token so the body
scanner can harvest the identifiers they mention.
"""

from __future__ import annotations

from dataclasses import dataclass

from kjlint.source import Language, SourceFile
from kjlint.syntax.model import ParseError

ID = "id"
NUM = "num"
STR = "str"
CHAR = "char"
OP = "op"
EOF = "eof"

# Longest match first. `<<`, `>>`, `>>>` are deliberately absent: generic
# closers must stay single `>` tokens.
_OPERATORS = sorted(
    [
        "...", "..<", "===", "!==", "<<=", ">>=", ">>>=",
        "?.", "?:", "!!", "::", "->", "..", "==", "!=", "<=", ">=", "&&", "||",
        "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
        "{", "}", "(", ")", "[", "]", ";", ",", ".", "@", "=", "<", ">", "!",
        "~", "?", ":", "+", "-", "*", "/", "%", "&", "|", "^", "#", "\\",
    ],
    key=len,
    reverse=True,
)
_JAVA_ONLY = {"<<=", ">>=", ">>>="}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int
    nl_before: bool = False
    inner: tuple[tuple[Token, ...], ...] = ()  # template parts of a Kotlin string

    def is_op(self, text: str) -> bool:
        return self.kind == OP and self.text == text

    def is_id(self, text: str | None = None) -> bool:
        return self.kind == ID and (text is None or self.text == text)


class _Lexer:
    def __init__(self, source: SourceFile) -> None:
        self.source = source
        self.text = source.text
        self.kotlin = source.language is Language.KOTLIN
        self.pos = 0
        self.n = len(self.text)

    def error(self, offset: int, expected: str) -> ParseError:
        line, col = self.source.position(offset)
        return ParseError(self.source.path, line, col, expected)

    def run(self, stop_at_brace: bool = False) -> list[Token]:
        tokens: list[Token] = []
        nl = False
        depth = 0
        text = self.text
        while True:
            nl = self._skip_trivia() or nl
            if self.pos >= self.n:
                if stop_at_brace:
                    raise self.error(self.pos, "'}' closing string template")
                tokens.append(Token(EOF, "", self.n, self.n, True))
                return tokens
            ch = text[self.pos]
            start = self.pos
            if stop_at_brace:
                if ch == "{":
                    depth += 1
                elif ch == "}":
                    if depth == 0:
                        self.pos += 1
                        return tokens
                    depth -= 1
            if ch.isalpha() or ch == "_" or ch == "$" and not self.kotlin:
                tokens.append(Token(ID, self._identifier(), start, self.pos, nl))
            elif ch == "`" and self.kotlin:
                end = text.find("`", start + 1)
                if end < 0 or "\n" in text[start:end]:
                    raise self.error(start, "closing '`'")
                self.pos = end + 1
                tokens.append(Token(ID, text[start + 1:end], start, self.pos, nl))
            elif ch.isdigit() or ch == "." and self._peek(1).isdigit():
                self._number()
                tokens.append(Token(NUM, text[start:self.pos], start, self.pos, nl))
            elif ch == '"':
                inner = self._string()
                tokens.append(Token(STR, text[start:self.pos], start, self.pos, nl, inner))
            elif ch == "'":
                self._char()
                tokens.append(Token(CHAR, text[start:self.pos], start, self.pos, nl))
            else:
                op = self._operator()
                if op is None:
                    raise self.error(start, "a token")
                tokens.append(Token(OP, op, start, self.pos, nl))
            nl = False

    def _peek(self, k: int) -> str:
        i = self.pos + k
        return self.text[i] if i < self.n else ""

    def _skip_trivia(self) -> bool:
        saw_newline = False
        text = self.text
        while self.pos < self.n:
            ch = text[self.pos]
            if ch == "\n":
                saw_newline = True
                self.pos += 1
            elif ch in " \t\r\f":
                self.pos += 1
            elif ch == "/" and self._peek(1) == "/":
                end = text.find("\n", self.pos)
                self.pos = self.n if end < 0 else end
            elif ch == "/" and self._peek(1) == "*":
                saw_newline = self._block_comment() or saw_newline
            else:
                break
        return saw_newline

    def _block_comment(self) -> bool:
        # Kotlin block comments nest, Java's do not.
        start = self.pos
        self.pos += 2
        depth = 1
        text = self.text
        while depth:
            if self.pos >= self.n:
                raise self.error(start, "'*/' closing comment")
            if text.startswith("*/", self.pos):
                depth -= 1
                self.pos += 2
            elif self.kotlin and text.startswith("/*", self.pos):
                depth += 1
                self.pos += 2
            else:
                self.pos += 1
        return "\n" in text[start:self.pos]

    def _identifier(self) -> str:
        start = self.pos
        text = self.text
        while self.pos < self.n and (text[self.pos].isalnum() or text[self.pos] == "_"
                                     or text[self.pos] == "$" and not self.kotlin):
            self.pos += 1
        return text[start:self.pos]

    def _number(self) -> None:
        text = self.text
        seen_dot = False
        while self.pos < self.n:
            ch = text[self.pos]
            if ch.isalnum() or ch == "_":
                if ch in "eE" and self._peek(1) in "+-" and not text[self.pos - 1:self.pos + 1].lower().startswith("0x"):
                    self.pos += 1
                self.pos += 1
            elif ch == "." and not seen_dot and self._peek(1).isdigit():
                seen_dot = True
                self.pos += 1
            else:
                break

    def _char(self) -> None:
        start = self.pos
        self.pos += 1
        while self.pos < self.n:
            ch = self.text[self.pos]
            if ch == "\\":
                self.pos += 2
                continue
            if ch == "'":
                self.pos += 1
                return
            if ch == "\n":
                break
            self.pos += 1
        raise self.error(start, "closing quote of character literal")

    def _string(self) -> tuple[tuple[Token, ...], ...]:
        start = self.pos
        text = self.text
        raw = text.startswith('"""', self.pos)
        self.pos += 3 if raw else 1
        parts: list[tuple[Token, ...]] = []
        while True:
            if self.pos >= self.n:
                raise self.error(start, "closing '\"'")
            ch = text[self.pos]
            if raw:
                if text.startswith('"""', self.pos):
                    self.pos += 3
                    # Kotlin allows extra quotes right before the closing delimiter.
                    while self.pos < self.n and text[self.pos] == '"':
                        self.pos += 1
                    return tuple(parts)
            elif ch == '"':
                self.pos += 1
                return tuple(parts)
            elif ch == "\n":
                raise self.error(start, "closing '\"'")
            elif ch == "\\":
                self.pos += 2
                continue
            if self.kotlin and ch == "$":
                nxt = self._peek(1)
                if nxt == "{":
                    self.pos += 2
                    sub = _Lexer(self.source)
                    sub.pos = self.pos
                    inner = sub.run(stop_at_brace=True)
                    self.pos = sub.pos
                    parts.append(tuple(inner))
                    continue
                if nxt.isalpha() or nxt == "_":
                    self.pos += 1
                    id_start = self.pos
                    name = self._identifier()
                    parts.append((Token(ID, name, id_start, self.pos),))
                    continue
            self.pos += 1

    def _operator(self) -> str | None:
        text = self.text
        for op in _OPERATORS:
            if text.startswith(op, self.pos):
                if op in _JAVA_ONLY and self.kotlin:
                    continue
                self.pos += len(op)
                return op
        return None


def tokenize(source: SourceFile) -> list[Token]:
    """Tokens of ``source`` terminated by an EOF token; raises ParseError on lexical errors."""
    return _Lexer(source).run()
