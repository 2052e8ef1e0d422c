"""Machinery shared by the Kotlin and Java parsers.

The parsers are hand-written recursive descent over the token list. Declaration
headers are parsed structurally; bodies go through :meth:`FrontEnd.scan`, a
linear scanner that recognises member-access chains, object creation, local
variable declarations and type positions, and emits one :class:`Reference` per
chain segment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from kjlint.source import Language, SourceFile
from kjlint.syntax.lexer import EOF, ID, OP, STR, Token, tokenize
from kjlint.syntax.model import (
    AnnotationRef,
    AstRoot,
    Declaration,
    DeclKind,
    ImportDecl,
    LocalVar,
    ParseError,
    Reference,
    RefKind,
    TypeRef,
    TypeRole,
)

JAVA_KEYWORDS = frozenset("""
    abstract assert boolean break byte case catch char class const continue default do double
    else enum extends final finally float for goto if implements import instanceof int interface
    long native new package private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while true false null
""".split())
JAVA_PRIMITIVES = frozenset("boolean byte char short int long float double void".split())

KOTLIN_KEYWORDS = frozenset("""
    as break class continue do else false for fun if in interface is null object package return
    super this throw true try typealias typeof val var when while
""".split())

_OPENERS = {"(": ")", "[": "]", "{": "}"}
_CLOSERS = frozenset(_OPENERS.values())

# A Kotlin line break does not end an expression when the previous token is one
# of these, or when the next line starts with one of _KOTLIN_CONT_START.
_KOTLIN_CONT_END = frozenset("""
    . ?. = + - * / % && || == != === !== < > <= >= ?: -> , .. ..< += -= *= /= %= :: ( [ { ! :
""".split())
_KOTLIN_CONT_START = frozenset([".", "?.", "?:", "&&", "||", "::", "->"])
_KOTLIN_CONT_START_WORDS = frozenset(["else", "catch", "finally", "as", "is", "in"])


@dataclass
class Seg:
    name: str
    tok: int
    called: bool = False
    created: bool = False
    qualifier: bool = False  # package/outer-type part of a `new a.b.C()` type path


@dataclass
class Chain:
    start: int
    end: int
    segs: list[Seg] = field(default_factory=list)
    pure: bool = True  # only `.name` and `(...)` links
    safe_call: bool = False
    bang_end: bool = False
    type_literal: bool = False

    @property
    def path(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.segs)


class FrontEnd:
    """State and helpers for parsing one file."""

    language: Language
    keywords: frozenset[str]

    def __init__(self, source: SourceFile) -> None:
        self.source = source
        self.toks: list[Token] = tokenize(source)
        self.pos = 0
        self.refs: list[Reference] = []
        self.all_decls: list[Declaration] = []
        self.top_decls: list[Declaration] = []
        self.scopes: list[Declaration] = []
        self.package: str | None = None
        self.imports: list[ImportDecl] = []
        self.file_annotations: list[AnnotationRef] = []
        self._chain_last_ref: dict[int, Reference] = {}

    @property
    def kotlin(self) -> bool:
        return self.language is Language.KOTLIN

    # ------------------------------------------------------------ tokens

    def tok(self, i: int) -> Token:
        return self.toks[i] if i < len(self.toks) else self.toks[-1]

    @property
    def cur(self) -> Token:
        return self.tok(self.pos)

    def at_op(self, text: str, i: int | None = None) -> bool:
        return self.tok(self.pos if i is None else i).is_op(text)

    def at_id(self, text: str | None = None, i: int | None = None) -> bool:
        return self.tok(self.pos if i is None else i).is_id(text)

    def error(self, i: int, expected: str) -> ParseError:
        line, col = self.source.position(self.tok(i).start)
        return ParseError(self.source.path, line, col, expected)

    def expect_op(self, text: str) -> Token:
        if not self.at_op(text):
            raise self.error(self.pos, f"'{text}'")
        self.pos += 1
        return self.toks[self.pos - 1]

    def expect_name(self, what: str = "identifier") -> Token:
        t = self.cur
        if t.kind != ID or t.text in self.keywords:
            raise self.error(self.pos, what)
        self.pos += 1
        return t

    def is_name(self, i: int) -> bool:
        t = self.tok(i)
        return t.kind == ID and t.text not in self.keywords

    def match_close(self, i: int) -> int:
        """Index of the bracket closing the opener at ``i``."""
        stack = [_OPENERS[self.toks[i].text]]
        j = i + 1
        while True:
            t = self.tok(j)
            if t.kind == EOF:
                raise self.error(i, f"'{stack[-1]}' before end of file")
            if t.kind == OP:
                if t.text in _OPENERS:
                    stack.append(_OPENERS[t.text])
                elif t.text in _CLOSERS:
                    if t.text != stack[-1]:
                        raise self.error(j, f"'{stack[-1]}'")
                    stack.pop()
                    if not stack:
                        return j
            j += 1

    def match_angle(self, i: int, limit: int | None = None) -> int | None:
        """Index of the ``>`` closing the ``<`` at ``i``, or None if the run is not a type list."""
        depth = 0
        j = i
        end = len(self.toks) if limit is None else limit
        while j < end:
            t = self.toks[j]
            if t.kind == OP:
                if t.text == "<":
                    depth += 1
                elif t.text == ">":
                    depth -= 1
                    if depth == 0:
                        return j
                elif t.text in ("(", "["):
                    if not self.kotlin:
                        if t.text == "[" and self.at_op("]", j + 1):
                            j += 2
                            continue
                        return None
                    j = self.match_close(j)
                elif t.text not in (",", ".", "?", "*", "&", "@", "->", ":"):
                    return None
            elif t.kind not in (ID,):
                return None
            elif t.text in ("new", "return", "if", "else", "this"):
                return None
            j += 1
        return None

    def span(self, first: int, last: int):
        """Range from the start of token ``first`` to the end of token ``last`` (inclusive)."""
        return self.source.span(self.toks[first].start, self.toks[last].end)

    def span_offsets(self, start: int, end: int):
        return self.source.span(start, end)

    # ------------------------------------------------------------ declarations

    @property
    def scope(self) -> Declaration | None:
        return self.scopes[-1] if self.scopes else None

    def qualify(self, name: str) -> str:
        if self.scope is not None:
            return f"{self.scope.qualified_name}.{name}"
        return f"{self.package}.{name}" if self.package else name

    def new_decl(self, kind: DeclKind, name_tok: Token, start_tok: int, modifiers: set[str],
                 annotations: list[AnnotationRef], parent: Declaration | None = None,
                 register: bool = True) -> Declaration:
        parent = self.scope if parent is None else parent
        qn = f"{parent.qualified_name}.{name_tok.text}" if parent else (
            f"{self.package}.{name_tok.text}" if self.package else name_tok.text)
        name_range = self.source.span(name_tok.start, name_tok.end)
        decl = Declaration(
            kind=kind,
            name=name_tok.text,
            qualified_name=qn,
            range=self.source.span(self.toks[start_tok].start, name_tok.end),
            name_range=name_range,
            modifiers=frozenset(modifiers),
            annotations=list(annotations),
            parent=parent.qualified_name if parent else None,
        )
        if register:
            decl.index = len(self.all_decls)
            self.all_decls.append(decl)
            if parent is None:
                self.top_decls.append(decl)
            else:
                parent.children.append(decl)
        return decl

    def close_decl(self, decl: Declaration, last_tok: int) -> None:
        end = max(self.toks[last_tok].end, decl.name_range.end)
        decl.range = self.source.span(decl.range.start, end)

    def new_param(self, owner: Declaration, name_tok: Token, first_tok: int, last_tok: int,
                  modifiers: set[str], annotations: list[AnnotationRef],
                  ptype: TypeRef | None) -> Declaration:
        param = Declaration(
            kind=DeclKind.PARAMETER,
            name=name_tok.text,
            qualified_name=f"{owner.qualified_name}.{name_tok.text}",
            range=self.span(first_tok, max(last_tok, first_tok)),
            name_range=self.source.span(name_tok.start, name_tok.end),
            modifiers=frozenset(modifiers),
            annotations=list(annotations),
            declared_type=ptype,
            parent=owner.qualified_name,
        )
        owner.params.append(param)
        owner.locals[name_tok.text] = LocalVar(name_tok.text, ptype)
        return param

    def build_root(self) -> AstRoot:
        for decl in self.all_decls:
            decl.body_refs = []
        for ref in self.refs:
            if ref.scope is not None:
                self.all_decls[ref.scope].body_refs.append(ref)
        return AstRoot(
            file=self.source,
            package_name=self.package,
            imports=self.imports,
            declarations=self.top_decls,
            file_annotations=self.file_annotations,
            references=self.refs,
            all_declarations=self.all_decls,
        )

    # ------------------------------------------------------------ references

    def emit(self, kind: RefKind, path: tuple[str, ...] | list[str], start: int, end: int,
             role: TypeRole | None = None, origin: str | None = None,
             confident: bool = True) -> Reference:
        scope = self.scope
        ref = Reference(
            kind=kind,
            name_path=tuple(path),
            range=self.source.span(start, end),
            enclosing_decl=scope.qualified_name if scope else None,
            receiver_origin=origin,
            role=role,
            scope=scope.index if scope else None,
            confident=confident,
        )
        self.refs.append(ref)
        return ref

    def harvest(self, i: int, end: int) -> None:
        """Record every identifier in an unrecognised token run as a low-confidence access."""
        for j in range(i, end):
            t = self.toks[j]
            if t.kind == ID and t.text not in self.keywords:
                self.emit(RefKind.FIELD_ACCESS, (t.text,), t.start, t.end, confident=False)
            elif t.kind == STR:
                for part in t.inner:
                    for sub in part:
                        if sub.kind == ID and sub.text not in self.keywords:
                            self.emit(RefKind.FIELD_ACCESS, (sub.text,), sub.start, sub.end,
                                      confident=False)

    # ------------------------------------------------------------ annotations

    def parse_annotation(self, i: int, emit: bool = True) -> tuple[AnnotationRef | None, int]:
        """Parse ``@Name(args)`` starting at the ``@`` token; returns the index after it."""
        at = i
        j = i + 1
        if self.kotlin and self.at_op("[", j):
            close = self.match_close(j)
            k = j + 1
            while k < close:
                if self.tok(k).kind == ID:
                    ann, k = self._annotation_body(at, k, emit)
                else:
                    k += 1
            return None, close + 1
        if self.kotlin and self.tok(j).kind == ID and self.at_op(":", j + 1) and \
                self.tok(j + 1).start == self.tok(j).end:
            j += 2  # use-site target such as @file: or @get:
        return self._annotation_body(at, j, emit)

    def _annotation_body(self, at: int, j: int, emit: bool) -> tuple[AnnotationRef, int]:
        if self.tok(j).kind != ID:
            raise self.error(j, "annotation name")
        first = j
        parts = [self.toks[j].text]
        j += 1
        while self.at_op(".", j) and self.tok(j + 1).kind == ID:
            parts.append(self.toks[j + 1].text)
            j += 2
        last = j - 1
        ann = AnnotationRef(".".join(parts), self.span(at, last))
        if emit:
            self.emit(RefKind.ANNOTATION_USE, parts, self.toks[first].start, self.toks[last].end)
        if self.at_op("<", j) and self.kotlin:
            close = self.match_angle(j)
            if close is not None:
                self.scan_type_args(j, close)
                j = close + 1
        if self.at_op("(", j) and not self.tok(j).nl_before and (
                not self.kotlin or self.tok(j).start == self.tok(j - 1).end):
            close = self.match_close(j)
            if emit:
                self.scan(j + 1, close)
            j = close + 1
        return ann, j

    # ------------------------------------------------------------ types

    def parse_type(self, i: int, role: TypeRole | None, emit: bool = True,
                   limit: int | None = None) -> tuple[TypeRef | None, int]:
        """Parse a type at ``i``; emits TypeUse references when ``emit`` and ``role`` are set."""
        end = len(self.toks) if limit is None else limit
        j = i
        while j < end and self.at_op("@", j):
            _, j = self.parse_annotation(j, emit)
        if self.kotlin:
            while j < end and self.at_id("suspend", j) and (self.at_op("(", j + 1) or self.tok(j + 1).kind == ID):
                j += 1
            if j < end and self.at_op("(", j):
                close = self.match_close(j)
                if emit:
                    self.scan_type_list(j + 1, close)
                k = close + 1
                nullable = False
                if self.at_op("->", k):
                    _, k = self.parse_type(k + 1, TypeRole.GENERIC if emit else None, emit, limit)
                    name = "Function"
                else:
                    name = "Function"
                while self.at_op("?", k):
                    nullable = True
                    k += 1
                return TypeRef(name, self.span(j, close), nullable), k
        if j >= end or self.tok(j).kind != ID:
            return None, i
        first = j
        t = self.toks[j]
        if t.text in self.keywords and not (not self.kotlin and t.text in JAVA_PRIMITIVES):
            return None, i
        parts = [t.text]
        last_name = j
        j += 1
        arg_ranges: list[tuple[int, int]] = []
        while j < end:
            if self.at_op("<", j):
                close = self.match_angle(j, end)
                if close is None:
                    break
                arg_ranges.append((j, close))
                j = close + 1
            elif self.at_op(".", j) and j + 1 < end and self.tok(j + 1).kind == ID \
                    and self.tok(j + 1).text not in ("class", "this", "new"):
                parts.append(self.toks[j + 1].text)
                last_name = j + 1
                j += 2
            else:
                break
        nullable = False
        dims = 0
        if self.kotlin:
            while j < end and self.at_op("?", j):
                nullable = True
                j += 1
            if j < end and self.at_op(".", j) and self.at_op("(", j + 1):
                # function type with receiver: `T.(A) -> R`
                close = self.match_close(j + 1)
                if emit:
                    self.scan_type_list(j + 2, close)
                j = close + 1
                if self.at_op("->", j):
                    _, j = self.parse_type(j + 1, TypeRole.GENERIC if emit else None, emit, limit)
                while self.at_op("?", j):
                    j += 1
                if emit and role is not None:
                    self.emit(RefKind.TYPE_USE, parts, self.toks[first].start,
                              self.toks[last_name].end, TypeRole.GENERIC)
                return TypeRef("Function", self.span(first, j - 1), nullable), j
        else:
            while j + 1 < end and self.at_op("[", j) and self.at_op("]", j + 1):
                dims += 1
                j += 2
            if j < end and self.at_op("...", j):
                dims += 1
                j += 1
        rng = self.source.span(self.toks[first].start, self.toks[last_name].end)
        if emit:
            if role is not None and not (not self.kotlin and t.text in JAVA_PRIMITIVES):
                self.emit(RefKind.TYPE_USE, parts, rng.start, rng.end, role)
            for a, b in arg_ranges:
                self.scan_type_args(a, b)
        return TypeRef(".".join(parts), rng, nullable, dims), j

    def scan_type_args(self, open_i: int, close_i: int) -> None:
        """Emit GENERIC type uses for every type inside ``<...>``."""
        j = open_i + 1
        while j < close_i:
            t = self.toks[j]
            if t.kind == ID and t.text not in ("in", "out", "extends", "super") and \
                    not (not self.kotlin and t.text in JAVA_PRIMITIVES):
                _, k = self.parse_type(j, TypeRole.GENERIC, True, close_i)
                j = k if k > j else j + 1
            elif t.is_op("@"):
                _, j = self.parse_annotation(j)
            else:
                j += 1

    def scan_type_list(self, i: int, end: int) -> None:
        """Emit GENERIC type uses inside a Kotlin function type's parameter list."""
        j = i
        while j < end:
            if self.tok(j).kind == ID and self.at_op(":", j + 1):
                j += 2  # named function-type parameter
                continue
            if self.tok(j).kind == ID or self.at_op("(", j):
                _, k = self.parse_type(j, TypeRole.GENERIC, True, end)
                j = k if k > j else j + 1
            else:
                j += 1

    # ------------------------------------------------------------ chains

    def is_chain_head(self, t: Token) -> bool:
        if t.kind != ID:
            return False
        if t.text in ("this", "super"):
            return True
        if not self.kotlin and t.text == "new":
            return True
        return t.text not in self.keywords

    def parse_chain(self, i: int, end: int) -> Chain | None:
        """Parse a member-access chain starting at ``i`` without emitting anything."""
        t = self.tok(i)
        ch = Chain(start=i, end=i)
        if self.kotlin and t.is_op("::"):
            if not self.is_name(i + 1):
                return None
            ch.segs.append(Seg(self.toks[i + 1].text, i + 1))
            ch.pure = False
            ch.end = i + 2
            return ch
        if not self.is_chain_head(t):
            return None
        j = i
        if not self.kotlin and t.text == "new":
            j = self._parse_creation(ch, i + 1, end)
            if j is None:
                return None
        else:
            ch.segs.append(Seg(t.text, i))
            j = i + 1
        while j < end:
            nt = self.toks[j]
            seg = ch.segs[-1]
            if nt.is_op("(") and not (self.kotlin and nt.nl_before):
                if seg.called and not self.kotlin:
                    break
                close = self.match_close(j)
                seg.called = True
                j = close + 1
                if self.kotlin and j < end and self.at_op("{", j) and not self.tok(j).nl_before:
                    j = self.match_close(j) + 1
                continue
            if self.kotlin and nt.is_op("{") and not nt.nl_before and not seg.called \
                    and seg.name not in ("this", "super"):
                seg.called = True
                j = self.match_close(j) + 1
                continue
            if nt.is_op("<") and self.kotlin and not seg.called:
                close = self.match_angle(j, end)
                if close is not None and close + 1 < end and (
                        self.at_op("(", close + 1) or self.at_op("::", close + 1)
                        or self.at_op("{", close + 1)):
                    j = close + 1
                    continue
                break
            if nt.is_op("["):
                ch.pure = False
                j = self.match_close(j) + 1
                continue
            if self.kotlin and nt.is_op("!!"):
                j += 1
                if j < end and (self.at_op(".", j) or self.at_op("?.", j)):
                    continue
                ch.bang_end = True
                break
            if nt.is_op(".") or nt.is_op("?.") or nt.is_op("::"):
                k = j + 1
                if nt.is_op("?."):
                    ch.safe_call = True
                if not self.kotlin and nt.is_op(".") and self.at_op("<", k):
                    close = self.match_angle(k, end)
                    if close is None:
                        break
                    k = close + 1
                if k >= end or self.tok(k).kind != ID:
                    break
                name = self.toks[k].text
                if name == "class":
                    ch.type_literal = True
                    ch.pure = False
                    j = k + 1
                    break
                if nt.is_op("::"):
                    ch.pure = False
                    if name == "new":
                        ch.segs[-1].created = True
                        j = k + 1
                        break
                ch.segs.append(Seg(name, k))
                j = k + 1
                continue
            break
        ch.end = j
        return ch

    def _parse_creation(self, ch: Chain, j: int, end: int) -> int | None:
        while self.at_op("@", j):
            _, j = self.parse_annotation(j, emit=False)
        if self.at_op("<", j):
            close = self.match_angle(j, end)
            if close is None:
                return None
            j = close + 1
        if self.tok(j).kind != ID:
            return None
        first = len(ch.segs)
        ch.segs.append(Seg(self.toks[j].text, j))
        j += 1
        while True:
            if self.at_op("<", j):
                close = self.match_angle(j, end)
                if close is None:
                    return None
                j = close + 1
            elif self.at_op(".", j) and self.tok(j + 1).kind == ID:
                ch.segs.append(Seg(self.toks[j + 1].text, j + 1))
                j += 2
            else:
                break
        for seg in ch.segs[first:-1]:
            seg.qualifier = True
        last = ch.segs[-1]
        if self.at_op("[", j):
            ch.pure = False
            ch.type_literal = True  # array creation: a type use, not an object creation
            while self.at_op("[", j):
                j = self.match_close(j) + 1
            if self.at_op("{", j):
                j = self.match_close(j) + 1
            return j
        if self.at_op("(", j):
            last.created = True
            j = self.match_close(j) + 1
            if self.at_op("{", j):
                j = self.match_close(j) + 1
            return j
        return None

    def emit_chain(self, ch: Chain, locals_: dict[str, LocalVar]) -> Reference | None:
        """Emit the references of a parsed chain and scan its argument lists."""
        toks = self.toks
        start = toks[ch.start].start
        path = ch.path
        last_ref: Reference | None = None
        head_local = locals_.get(path[0]) if path else None
        origin = None
        if head_local is not None and head_local.origin:
            origin = ".".join(head_local.origin)
        if ch.type_literal:
            prefix = [s for s in ch.segs]
            if prefix and prefix[0].name not in ("this", "super"):
                ref = self.emit(RefKind.TYPE_USE, path, start, toks[prefix[-1].tok].end,
                                TypeRole.OTHER)
                last_ref = ref
        else:
            for k, seg in enumerate(ch.segs):
                if seg.qualifier or seg.name in ("this", "super") and k == 0:
                    continue
                if seg.created or (self.kotlin and seg.called and seg.name[:1].isupper()):
                    kind = RefKind.OBJECT_CREATION
                elif seg.called:
                    kind = RefKind.CALL
                else:
                    kind = RefKind.FIELD_ACCESS
                last_ref = self.emit(kind, path[:k + 1], start, toks[seg.tok].end,
                                     origin=origin if k > 0 else None)
        if last_ref is not None:
            self._chain_last_ref[ch.start] = last_ref
        # argument lists, index expressions, trailing lambdas, anonymous class bodies
        j = ch.start
        while j < ch.end:
            t = toks[j]
            if t.kind == OP and t.text in _OPENERS:
                close = self.match_close(j)
                if t.text == "{" and not self.kotlin and not ch.type_literal:
                    self.scan_block_members(j + 1, close)
                else:
                    self.scan(j + 1, close, lambda_open=(t.text == "{"))
                j = close + 1
            elif t.kind == OP and t.text == "<" and j > ch.start:
                close = self.match_angle(j, ch.end)
                if close is None:
                    j += 1
                    continue
                self.scan_type_args(j, close)
                j = close + 1
            elif t.kind == STR:
                self.scan_string(t)
                j += 1
            else:
                j += 1
        return last_ref

    def scan_string(self, t: Token) -> None:
        for part in t.inner:
            sub = _SubScanner(self, part)
            sub.run()

    def whole_chain_ref(self, i: int, end: int) -> Reference | None:
        """If tokens ``[i, end)`` are exactly one pure chain, the reference for its last segment."""
        ch = self.parse_chain(i, end)
        if ch is None or ch.end != end or not ch.pure or ch.safe_call or ch.bang_end:
            return None
        return self._chain_last_ref.get(i)

    def chain_origin(self, i: int, end: int) -> tuple[tuple[str, ...] | None, bool]:
        """Origin path of an initializer that is a single chain (and whether it creates)."""
        ch = self.parse_chain(i, end)
        if ch is None or ch.end != end or ch.type_literal or not ch.segs:
            return None, False
        if ch.segs[0].name in ("this", "super") and len(ch.segs) == 1:
            return None, False
        last = ch.segs[-1]
        created = last.created or (self.kotlin and last.called and last.name[:1].isupper())
        path = tuple(s.name for s in ch.segs if s.name not in ("this",) or s is not ch.segs[0])
        return path, created

    # ------------------------------------------------------------ body scanning

    def current_locals(self) -> dict[str, LocalVar]:
        scope = self.scope
        return scope.locals if scope is not None else {}

    def scan(self, i: int, end: int, lambda_open: bool = False) -> None:
        raise NotImplementedError

    def scan_block_members(self, i: int, end: int) -> None:
        self.scan(i, end)


class _SubScanner:
    """Scans the tokens of one Kotlin string-template part with the owner's rules."""

    def __init__(self, owner: FrontEnd, tokens: tuple[Token, ...]) -> None:
        self.owner = owner
        self.tokens = list(tokens)

    def run(self) -> None:
        owner = self.owner
        saved, saved_chains = owner.toks, owner._chain_last_ref
        eof_at = self.tokens[-1].end if self.tokens else 0
        owner.toks = self.tokens + [Token(EOF, "", eof_at, eof_at, True)]
        owner._chain_last_ref = {}
        try:
            owner.scan(0, len(self.tokens))
        finally:
            owner.toks, owner._chain_last_ref = saved, saved_chains
