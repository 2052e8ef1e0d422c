"""Recursive-descent parser for the Kotlin subset."""

from __future__ import annotations

from kjlint.source import Language
from kjlint.syntax._base import (
    _KOTLIN_CONT_END,
    _KOTLIN_CONT_START,
    _KOTLIN_CONT_START_WORDS,
    KOTLIN_KEYWORDS,
    FrontEnd,
)
from kjlint.syntax.lexer import EOF, ID, OP, STR, Token
from kjlint.syntax.model import (
    AnnotationRef,
    AstRoot,
    Declaration,
    DeclKind,
    ImportDecl,
    LocalVar,
    RefKind,
    TypeRef,
    TypeRole,
)

MODIFIERS = frozenset("""
    public private protected internal open final abstract sealed data enum annotation inner
    companion override lateinit const suspend inline noinline crossinline tailrec external
    operator infix vararg reified expect actual value
""".split())
_OPENERS = {"(": ")", "[": "]", "{": "}"}


class KotlinFrontEnd(FrontEnd):
    language = Language.KOTLIN
    keywords = KOTLIN_KEYWORDS

    def parse(self) -> AstRoot:
        while self.at_op("@") and self.at_id("file", self.pos + 1) and self.at_op(":", self.pos + 2):
            ann, self.pos = self.parse_annotation(self.pos)
            if ann is not None:
                self.file_annotations.append(ann)
        if self.at_id("package"):
            self.pos += 1
            parts, _, _ = self._qualified_name()
            self.package = ".".join(parts)
            self._semi()
        while self.at_id("import"):
            self._import()
        while self.cur.kind != EOF:
            if self.at_op(";"):
                self.pos += 1
                continue
            start = self.pos
            mods, anns = self._modifiers()
            if not self._declaration(start, mods, anns, top_level=True):
                raise self.error(self.pos, "top-level declaration")
        return self.build_root()

    # ------------------------------------------------------------ headers

    def _semi(self) -> None:
        if self.at_op(";"):
            self.pos += 1

    def _qualified_name(self) -> tuple[list[str], int, bool]:
        first = self.pos
        parts = [self.expect_name("qualified name").text]
        wildcard = False
        while self.at_op("."):
            if self.at_op("*", self.pos + 1):
                wildcard = True
                self.pos += 2
                break
            self.pos += 1
            t = self.cur
            if t.kind != ID:
                raise self.error(self.pos, "identifier after '.'")
            parts.append(t.text)
            self.pos += 1
        return parts, first, wildcard

    def _import(self) -> None:
        start = self.pos
        self.pos += 1
        parts, first, wildcard = self._qualified_name()
        last = self.pos - 1
        last_name = self.pos - (3 if wildcard else 1)
        alias = None
        if not wildcard and self.at_id("as"):
            self.pos += 1
            alias = self.expect_name("import alias").text
            last = self.pos - 1
        self.imports.append(ImportDecl(
            target=".".join(parts),
            range=self.span(start, last),
            is_wildcard=wildcard,
            alias=alias,
        ))
        self.emit(RefKind.IMPORT_USE, parts, self.toks[first].start, self.toks[last_name].end)
        self._semi()

    def _modifiers(self) -> tuple[set[str], list[AnnotationRef]]:
        mods: set[str] = set()
        anns: list[AnnotationRef] = []
        while True:
            t = self.cur
            nxt = self.tok(self.pos + 1)
            if t.is_op("@"):
                ann, self.pos = self.parse_annotation(self.pos)
                if ann is not None:
                    anns.append(ann)
            elif t.kind == ID and t.text in MODIFIERS and (nxt.kind == ID or nxt.is_op("@")):
                mods.add(t.text)
                self.pos += 1
            elif t.is_id("fun") and nxt.is_id("interface"):
                mods.add("fun")
                self.pos += 1
            else:
                return mods, anns

    def _declaration(self, start: int, mods: set[str], anns: list[AnnotationRef],
                     top_level: bool = False) -> bool:
        t = self.cur
        if t.kind != ID:
            return False
        if t.text in ("class", "interface", "object"):
            self._class(start, mods, anns)
        elif t.text == "fun":
            self._function(start, mods, anns)
        elif t.text in ("val", "var"):
            self._property(start, mods, anns)
        elif t.text == "typealias":
            end = self._expr_end(self.pos + 1, stop_comma=False)
            self.harvest(self.pos + 1, end)
            self.pos = end
        else:
            return False
        return True

    def _type_params(self, i: int) -> int:
        close = self.match_angle(i)
        if close is None:
            raise self.error(i, "type parameter list")
        j = i + 1
        while j < close:
            if self.at_op(":", j):
                _, k = self.parse_type(j + 1, TypeRole.OTHER, limit=close)
                j = max(k, j + 1)
            elif self.at_op("@", j):
                _, j = self.parse_annotation(j)
            else:
                j += 1
        return close + 1

    def _where(self) -> None:
        if not self.at_id("where"):
            return
        self.pos += 1
        while self.is_name(self.pos) and self.at_op(":", self.pos + 1):
            _, self.pos = self.parse_type(self.pos + 2, TypeRole.OTHER)
            if not self.at_op(","):
                return
            self.pos += 1

    # ------------------------------------------------------------ classes

    def _class(self, start: int, mods: set[str], anns: list[AnnotationRef]) -> Declaration:
        kw = self.cur
        self.pos += 1
        if kw.text == "interface":
            kind = DeclKind.INTERFACE
        elif kw.text == "object":
            kind = DeclKind.OBJECT
        elif "enum" in mods:
            kind = DeclKind.ENUM
        else:
            kind = DeclKind.CLASS
        if kw.text == "object" and "companion" in mods and not self.is_name(self.pos):
            name = Token(ID, "Companion", kw.start, kw.end)
        else:
            name = self.expect_name(f"{kw.text} name")
        decl = self.new_decl(kind, name, start, mods, anns)
        self.scopes.append(decl)
        last = self.pos - 1
        if self.at_op("<"):
            self.pos = self._type_params(self.pos)
            last = self.pos - 1
        # primary constructor, possibly with its own modifiers
        j = self.pos
        saved = self.pos
        ctor_mods: set[str] = set()
        ctor_anns: list[AnnotationRef] = []
        if (self.at_op("@") or self.at_id("constructor") or self.cur.text in MODIFIERS) \
                and not self.cur.nl_before:
            ctor_mods, ctor_anns = self._modifiers()
            if self.at_id("constructor"):
                self.pos += 1
            else:
                self.pos = saved
                ctor_mods, ctor_anns = set(), []
        if self.at_op("(") and (not self.cur.nl_before or self.pos != j):
            ctor = self.new_decl(DeclKind.FUNCTION, name, start, ctor_mods, ctor_anns)
            ctor.is_constructor = True
            self.scopes.append(ctor)
            last = self._params(ctor, ctor_class=decl)
            self.scopes.pop()
            self.close_decl(ctor, last)
        if self.at_op(":"):
            self.pos += 1
            last = self._supertypes(decl)
        self._where()
        if self.at_op("{"):
            close = self.match_close(self.pos)
            self.pos += 1
            if kind is DeclKind.ENUM:
                self._enum_entries(decl, close)
            self._members(close)
            self.pos = close + 1
            last = close
        self.scopes.pop()
        self.close_decl(decl, last)
        return decl

    def _supertypes(self, decl: Declaration | None) -> int:
        last = self.pos
        while True:
            ty, j = self.parse_type(self.pos, None)
            if ty is None:
                raise self.error(self.pos, "supertype")
            self.emit(RefKind.SUPER_TYPE, ty.name.split("."), ty.range.start, ty.range.end)
            if decl is not None:
                decl.supertypes.append(ty)
            self.pos = j
            last = j - 1
            if self.at_op("(") and not self.cur.nl_before:
                close = self.match_close(self.pos)
                self.scan(self.pos + 1, close)
                self.pos = close + 1
                last = close
            if self.at_id("by"):
                end = self._expr_end(self.pos + 1, stop_brace=True)
                self.scan(self.pos + 1, end)
                self.pos = end
                last = end - 1
            if not self.at_op(","):
                return last
            self.pos += 1

    def _enum_entries(self, enum: Declaration, close: int) -> None:
        enum_type = TypeRef(enum.name, enum.name_range)
        while self.pos < close:
            start = self.pos
            _, anns = self._modifiers()
            if not self.is_name(self.pos) or self.cur.text in ("fun", "val", "var"):
                self.pos = start
                return
            nxt = self.tok(self.pos + 1)
            if not (nxt.is_op("(") or nxt.is_op(",") or nxt.is_op(";") or nxt.is_op("{")
                    or self.pos + 1 == close):
                self.pos = start
                return
            name = self.cur
            self.pos += 1
            entry = self.new_decl(DeclKind.PROPERTY, name, start, {"public"}, anns)
            entry.declared_type = enum_type
            self.scopes.append(entry)
            last = self.pos - 1
            if self.at_op("("):
                args_close = self.match_close(self.pos)
                self.scan(self.pos + 1, args_close)
                self.pos = last = args_close
                self.pos += 1
            if self.at_op("{"):
                body_close = self.match_close(self.pos)
                self.pos += 1
                self._members(body_close)
                self.pos = body_close + 1
                last = body_close
            self.scopes.pop()
            self.close_decl(entry, last)
            if self.at_op(","):
                self.pos += 1
            elif self.at_op(";"):
                self.pos += 1
                return

    def _members(self, close: int) -> None:
        while self.pos < close:
            if self.at_op(";"):
                self.pos += 1
                continue
            start = self.pos
            mods, anns = self._modifiers()
            if self._declaration(start, mods, anns):
                continue
            if self.at_id("init") and self.at_op("{", self.pos + 1):
                block_close = self.match_close(self.pos + 1)
                self.scan(self.pos + 2, block_close)
                self.pos = block_close + 1
            elif self.at_id("constructor") and self.at_op("(", self.pos + 1):
                self._secondary_ctor(start, mods, anns)
            else:
                end = self._expr_end(self.pos, stop_comma=False)
                end = max(end, self.pos + 1)
                self.harvest(self.pos, min(end, close))
                self.pos = min(end, close)

    def _secondary_ctor(self, start: int, mods: set[str], anns: list[AnnotationRef]) -> None:
        name = self.cur
        self.pos += 1
        ctor = self.new_decl(DeclKind.FUNCTION, name, start, mods, anns)
        ctor.is_constructor = True
        self.scopes.append(ctor)
        last = self._params(ctor)
        if self.at_op(":"):
            self.pos += 1
            end = self._expr_end(self.pos, stop_brace=True)
            self.scan(self.pos, end)
            self.pos = end
            last = end - 1
        if self.at_op("{"):
            close = self.match_close(self.pos)
            self.scan(self.pos + 1, close)
            self.pos = close + 1
            last = close
        self.scopes.pop()
        self.close_decl(ctor, last)

    # ------------------------------------------------------------ functions and properties

    def _params(self, owner: Declaration, ctor_class: Declaration | None = None) -> int:
        if not self.at_op("("):
            raise self.error(self.pos, "'('")
        close = self.match_close(self.pos)
        self.pos += 1
        while self.pos < close:
            first = self.pos
            mods, anns = self._modifiers()
            prop_kw = None
            if self.at_id("val") or self.at_id("var"):
                prop_kw = self.cur.text
                self.pos += 1
            name = self.expect_name("parameter name")
            ty = None
            ty_start = None
            if self.at_op(":"):
                ty_start = self.pos + 1
                ty, k = self.parse_type(ty_start, None, emit=False, limit=close)
                if ty is None:
                    raise self.error(ty_start, "parameter type")
                self.pos = k
            if prop_kw and ctor_class is not None:
                prop = self.new_decl(DeclKind.PROPERTY, name, first, mods | {prop_kw}, anns,
                                     parent=ctor_class)
                prop.declared_type = ty
                prop.has_explicit_return_type = ty is not None
                self.scopes.append(prop)
                if ty_start is not None:
                    self.parse_type(ty_start, TypeRole.PROPERTY, limit=close)
                self.scopes.pop()
                self.close_decl(prop, self.pos - 1)
            elif ty_start is not None:
                self.parse_type(ty_start, TypeRole.PARAMETER, limit=close)
            self.new_param(owner, name, first, self.pos - 1, mods, anns, ty)
            if self.at_op("="):
                end = self._expr_end(self.pos + 1)
                self.scan(self.pos + 1, end)
                self.pos = end
            if self.at_op(","):
                self.pos += 1
            elif self.pos != close:
                raise self.error(self.pos, "',' or ')' in parameter list")
        self.pos = close + 1
        return close

    def _receiver_split(self, i: int, stop: tuple[str, ...]) -> tuple[int, int]:
        """Locate the declared name after ``fun``/``val``; returns (name index, receiver end)."""
        j = i
        last_dot = -1
        while True:
            t = self.tok(j)
            if t.kind == EOF:
                raise self.error(j, "declaration name")
            if t.kind == OP:
                if t.text == "<":
                    close = self.match_angle(j)
                    if close is None:
                        raise self.error(j, "'>'")
                    j = close + 1
                    continue
                if t.text == "(" and j == i:
                    j = self.match_close(j) + 1  # function-type receiver
                    continue
                if t.text in stop:
                    break
                if t.text == ".":
                    last_dot = j
                elif t.text != "?":
                    break
            elif j > i and (t.nl_before or self.tok(j - 1).kind == ID):
                break
            j += 1
        name_i = j - 1
        if last_dot < 0 or last_dot != name_i - 1:
            return name_i, -1
        return name_i, last_dot

    def _function(self, start: int, mods: set[str], anns: list[AnnotationRef]) -> None:
        self.pos += 1
        tparams = None
        if self.at_op("<"):
            tparams = self.pos
            close = self.match_angle(self.pos)
            if close is None:
                raise self.error(self.pos, "type parameter list")
            self.pos = close + 1
        recv_start = self.pos
        name_i, dot = self._receiver_split(self.pos, ("(",))
        self.pos = name_i
        name = self.expect_name("function name")
        decl = self.new_decl(DeclKind.FUNCTION, name, start, mods, anns)
        self.scopes.append(decl)
        if tparams is not None:
            self._type_params(tparams)
        if dot >= 0:
            decl.receiver_type, _ = self.parse_type(recv_start, TypeRole.RECEIVER, limit=dot)
        last = self._params(decl)
        if self.at_op(":"):
            ty, self.pos = self.parse_type(self.pos + 1, TypeRole.RETURN)
            if ty is None:
                raise self.error(self.pos, "return type")
            decl.declared_type = ty
            decl.has_explicit_return_type = True
            last = self.pos - 1
        self._where()
        if self.at_op("="):
            body = self.pos + 1
            end = self._expr_end(body)
            if end <= body:
                raise self.error(body, "expression")
            self.scan(body, end)
            decl.is_single_expression = True
            decl.value_ref = self.whole_chain_ref(body, end)
            self.pos = end
            last = end - 1
        elif self.at_op("{"):
            close = self.match_close(self.pos)
            self.scan(self.pos + 1, close)
            self.pos = close + 1
            last = close
        self.scopes.pop()
        self.close_decl(decl, last)

    def _property(self, start: int, mods: set[str], anns: list[AnnotationRef]) -> None:
        mods = mods | {self.cur.text}
        self.pos += 1
        tparams = None
        if self.at_op("<"):
            tparams = self.pos
            close = self.match_angle(self.pos)
            if close is None:
                raise self.error(self.pos, "type parameter list")
            self.pos = close + 1
        recv_start = self.pos
        name_i, dot = self._receiver_split(self.pos, (":", "=", ";"))
        self.pos = name_i
        name = self.expect_name("property name")
        decl = self.new_decl(DeclKind.PROPERTY, name, start, mods, anns)
        self.scopes.append(decl)
        if tparams is not None:
            self._type_params(tparams)
        if dot >= 0:
            decl.receiver_type, _ = self.parse_type(recv_start, TypeRole.RECEIVER, limit=dot)
        last = self.pos - 1
        if self.at_op(":"):
            ty, self.pos = self.parse_type(self.pos + 1, TypeRole.PROPERTY)
            if ty is None:
                raise self.error(self.pos, "property type")
            decl.declared_type = ty
            decl.has_explicit_return_type = True
            last = self.pos - 1
        self._where()
        if self.at_op("=") or self.at_id("by"):
            body = self.pos + 1
            end = self._expr_end(body)
            if end <= body:
                raise self.error(body, "expression")
            self.scan(body, end)
            decl.has_initializer = True
            if self.at_op("="):
                decl.value_ref = self.whole_chain_ref(body, end)
            self.pos = end
            last = end - 1
        last = self._accessors(decl, last)
        self.scopes.pop()
        self.close_decl(decl, last)

    def _accessors(self, decl: Declaration, last: int) -> int:
        while True:
            j = self.pos
            while self.at_op("@", j) or (self.tok(j).kind == ID and self.tok(j).text in MODIFIERS
                                          and self.tok(j + 1).kind in (ID, OP)):
                if self.at_op("@", j):
                    _, j = self.parse_annotation(j)
                else:
                    j += 1
            if not (self.at_id("get", j) or self.at_id("set", j)):
                return last
            getter = self.at_id("get", j)
            j += 1
            if self.at_op("(", j):
                close = self.match_close(j)
                if self.is_name(j + 1):
                    decl.locals[self.toks[j + 1].text] = LocalVar(self.toks[j + 1].text,
                                                                  decl.declared_type)
                j = close + 1
                if self.at_op(":", j):
                    _, j = self.parse_type(j + 1, TypeRole.OTHER)
            last = j - 1
            if self.at_op("=", j):
                end = self._expr_end(j + 1)
                self.scan(j + 1, end)
                if getter and decl.value_ref is None and not decl.has_initializer:
                    decl.value_ref = self.whole_chain_ref(j + 1, end)
                j = end
                last = end - 1
            elif self.at_op("{", j):
                close = self.match_close(j)
                self.scan(j + 1, close)
                j = close + 1
                last = close
            self.pos = j

    # ------------------------------------------------------------ expressions

    def _expr_end(self, i: int, stop_comma: bool = True, stop_brace: bool = False) -> int:
        """Index just past the expression starting at ``i`` (newline-terminated)."""
        j = i
        while True:
            t = self.tok(j)
            if t.kind == EOF:
                return j
            if j > i and t.nl_before:
                prev = self.toks[j - 1]
                continues = (prev.kind == OP and prev.text in _KOTLIN_CONT_END) or \
                    (t.kind == OP and t.text in _KOTLIN_CONT_START) or \
                    (t.kind == ID and t.text in _KOTLIN_CONT_START_WORDS)
                if not continues:
                    return j
            if t.kind == OP:
                if stop_brace and t.text == "{":
                    return j
                if t.text in _OPENERS:
                    j = self.match_close(j) + 1
                    continue
                if t.text in (")", "]", "}", ";") or (stop_comma and t.text == ","):
                    return j
            j += 1

    def scan(self, i: int, end: int, lambda_open: bool = False) -> None:
        toks = self.toks
        locals_ = self.current_locals()
        if lambda_open:
            i = self._lambda_params(i, end, locals_)
        while i < end:
            t = toks[i]
            if t.kind == OP:
                x = t.text
                if x == "@":
                    prev = toks[i - 1] if i > 0 else None
                    if prev is not None and prev.end == t.start and prev.kind == ID:
                        i += 2 if self.tok(i + 1).kind == ID else 1  # label reference
                        continue
                    _, i = self.parse_annotation(i)
                    continue
                if x == "::":
                    ch = self.parse_chain(i, end)
                    if ch is not None:
                        self.emit_chain(ch, locals_)
                        i = ch.end
                        continue
                if x == "{":
                    i = self._lambda_params(i + 1, self.match_close(i), locals_)
                    continue
                i += 1
                continue
            if t.kind == STR:
                self.scan_string(t)
                i += 1
                continue
            if t.kind != ID:
                i += 1
                continue
            w = t.text
            nxt = self.tok(i + 1)
            if nxt.is_op("@") and nxt.start == t.end and w not in ("this", "super", "return",
                                                                    "break", "continue"):
                i += 2  # label definition
                continue
            if w in ("val", "var"):
                i = self._local_var(i + 1, end, locals_)
                continue
            if w == "fun":
                i = self._local_fun(i + 1, end, locals_)
                continue
            if w == "for" and nxt.is_op("("):
                i = self._for_header(i + 2, end, locals_)
                continue
            if w == "catch" and nxt.is_op("("):
                close = self.match_close(i + 1)
                if self.is_name(i + 2) and self.at_op(":", i + 3):
                    ty, _ = self.parse_type(i + 4, TypeRole.OTHER, limit=close)
                    locals_[toks[i + 2].text] = LocalVar(toks[i + 2].text, ty)
                i = close + 1
                continue
            if w in ("is", "as"):
                j = i + 1
                if w == "as" and self.at_op("?", j):
                    j += 1
                _, k = self.parse_type(j, TypeRole.OTHER, limit=end)
                i = max(k, j)
                continue
            if w == "object" and nxt.is_op(":"):
                self.pos = i + 2
                self._supertypes(None)
                i = self.pos
                continue
            if w in ("class", "interface") and self.is_name(i + 1):
                i += 2
                continue
            if w in MODIFIERS and nxt.kind == ID and not nxt.nl_before:
                i += 1
                continue
            if w in self.keywords and w not in ("this", "super"):
                i += 1
                continue
            ch = self.parse_chain(i, end)
            if ch is not None and ch.end > i:
                self.emit_chain(ch, locals_)
                i = ch.end
                continue
            i += 1

    def _lambda_params(self, i: int, end: int, locals_: dict[str, LocalVar]) -> int:
        """If a lambda body at ``i`` starts with ``a, (b, c), d: T ->``, bind the names."""
        j = i
        while j < end:
            t = self.tok(j)
            if t.is_op("->"):
                break
            if t.kind == ID and t.text not in self.keywords:
                if self.at_op(":", j + 1):
                    _, k = self.parse_type(j + 2, None, emit=False, limit=end)
                    if k == j + 2:
                        return i
                    j = k
                    continue
                j += 1
                continue
            if t.kind == OP and t.text in ("(", ")", ","):
                j += 1
                continue
            return i
        else:
            return i
        k = i
        while k < j:
            t = self.toks[k]
            if t.kind == ID and t.text not in self.keywords:
                ty = None
                nk = k + 1
                if self.at_op(":", k + 1):
                    ty, nk = self.parse_type(k + 2, TypeRole.OTHER, limit=j)
                locals_[t.text] = LocalVar(t.text, ty)
                k = nk
                continue
            k += 1
        return j + 1

    def _local_var(self, i: int, end: int, locals_: dict[str, LocalVar]) -> int:
        toks = self.toks
        if self.at_op("(", i):
            close = self.match_close(i)
            j = i + 1
            while j < close:
                if self.is_name(j):
                    ty = None
                    k = j + 1
                    if self.at_op(":", k):
                        ty, k = self.parse_type(k + 1, TypeRole.LOCAL, limit=close)
                    locals_[toks[j].text] = LocalVar(toks[j].text, ty)
                    j = k
                else:
                    j += 1
            j = close + 1
            if self.at_op("=", j):
                init_end = min(self._expr_end(j + 1), end)
                self.scan(j + 1, init_end)
                return init_end
            return j
        if not self.is_name(i):
            return i
        name = toks[i].text
        j = i + 1
        ty = None
        if self.at_op(":", j):
            ty, j = self.parse_type(j + 1, TypeRole.LOCAL, limit=end)
        if (self.at_op("=", j) or self.at_id("by", j)) and j + 1 < end:
            init_end = min(self._expr_end(j + 1), end)
            origin, created = self.chain_origin(j + 1, init_end) if self.at_op("=", j) else (None, False)
            locals_[name] = LocalVar(name, ty, origin, created)
            self.scan(j + 1, init_end)
            return init_end
        locals_[name] = LocalVar(name, ty)
        return j

    def _local_fun(self, i: int, end: int, locals_: dict[str, LocalVar]) -> int:
        j = i
        if self.at_op("<", j):
            close = self.match_angle(j, end)
            j = close + 1 if close is not None else j + 1
        while j < end and not self.at_op("(", j):
            j += 1
        if j >= end:
            return j
        close = self.match_close(j)
        k = j + 1
        while k < close:
            if self.is_name(k) and self.at_op(":", k + 1):
                ty, nk = self.parse_type(k + 2, TypeRole.OTHER, limit=close)
                locals_[self.toks[k].text] = LocalVar(self.toks[k].text, ty)
                k = max(nk, k + 2)
            elif self.at_op("=", k):
                e = min(self._expr_end(k + 1), close)
                self.scan(k + 1, e)
                k = e
            else:
                k += 1
        j = close + 1
        if self.at_op(":", j):
            _, j = self.parse_type(j + 1, TypeRole.OTHER, limit=end)
        return j

    def _for_header(self, i: int, end: int, locals_: dict[str, LocalVar]) -> int:
        j = i
        if self.at_op("(", j):
            close = self.match_close(j)
            for k in range(j + 1, close):
                if self.is_name(k):
                    locals_[self.toks[k].text] = LocalVar(self.toks[k].text)
            j = close + 1
        elif self.is_name(j):
            name = self.toks[j].text
            ty = None
            j += 1
            if self.at_op(":", j):
                ty, j = self.parse_type(j + 1, TypeRole.LOCAL, limit=end)
            locals_[name] = LocalVar(name, ty)
        if self.at_id("in", j):
            j += 1
        return j
