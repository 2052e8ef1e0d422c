"""Recursive-descent parser for the Java subset."""

from __future__ import annotations

from kjlint.source import Language
from kjlint.syntax._base import JAVA_KEYWORDS, FrontEnd
from kjlint.syntax.lexer import EOF, ID, OP, STR
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
    public protected private static abstract final native synchronized transient volatile
    strictfp default sealed
""".split())
_TYPE_KEYWORDS = {"class": DeclKind.CLASS, "interface": DeclKind.INTERFACE,
                  "enum": DeclKind.ENUM, "record": DeclKind.CLASS}
_CONTROL = frozenset(["if", "while", "for", "switch", "synchronized", "try"])
_LOCAL_MODIFIERS = frozenset(["final", "static", "public", "private", "protected", "abstract",
                              "transient", "volatile", "native", "strictfp", "default"])


class JavaFrontEnd(FrontEnd):
    language = Language.JAVA
    keywords = JAVA_KEYWORDS

    def parse(self) -> AstRoot:
        if self.at_op("@") and not self.at_id("interface", 1):
            j = 0
            while self.at_op("@", j) and not self.at_id("interface", j + 1):
                _, j = self.parse_annotation(j)
            if self.at_id("package", j):
                self.pos = j
            # otherwise the annotations belong to the first type; re-parse them there
        if self.at_id("package"):
            self.pos += 1
            parts, _, _ = self._qualified_name()
            self.package = ".".join(parts)
            self.expect_op(";")
        while self.at_id("import") or self.at_op(";"):
            if self.at_op(";"):
                self.pos += 1
                continue
            self._import()
        while self.cur.kind != EOF:
            if self.at_op(";"):
                self.pos += 1
                continue
            start = self.pos
            mods, anns = self._modifiers()
            if not self._at_type_keyword():
                raise self.error(self.pos, "class, interface, enum or record declaration")
            self._type_decl(start, mods, anns)
        return self.build_root()

    # ------------------------------------------------------------ headers

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
            parts.append(self.expect_name("identifier after '.'").text)
        return parts, first, wildcard

    def _import(self) -> None:
        start = self.pos
        self.pos += 1
        static = False
        if self.at_id("static"):
            static = True
            self.pos += 1
        parts, first, wildcard = self._qualified_name()
        last_name = self.pos - (3 if wildcard else 1)
        end_tok = self.expect_op(";")
        decl = ImportDecl(
            target=".".join(parts),
            range=self.source.span(self.toks[start].start, end_tok.end),
            is_wildcard=wildcard,
            is_static=static,
        )
        self.imports.append(decl)
        self.emit(RefKind.IMPORT_USE, parts, self.toks[first].start, self.toks[last_name].end)

    def _modifiers(self) -> tuple[set[str], list[AnnotationRef]]:
        mods: set[str] = set()
        anns: list[AnnotationRef] = []
        while True:
            t = self.cur
            if t.is_op("@") and not self.at_id("interface", self.pos + 1):
                ann, self.pos = self.parse_annotation(self.pos)
                if ann is not None:
                    anns.append(ann)
            elif t.kind == ID and t.text in MODIFIERS:
                mods.add(t.text)
                self.pos += 1
            elif t.is_id("non") and self.at_op("-", self.pos + 1) and self.at_id("sealed", self.pos + 2):
                mods.add("non-sealed")
                self.pos += 3
            else:
                return mods, anns

    def _at_type_keyword(self) -> bool:
        t = self.cur
        if t.is_op("@") and self.at_id("interface", self.pos + 1):
            return True
        if t.kind != ID or t.text not in _TYPE_KEYWORDS:
            return False
        if t.text == "record":
            return self.is_name(self.pos + 1) and (self.at_op("(", self.pos + 2) or self.at_op("<", self.pos + 2))
        return True

    def _type_list(self, decl: Declaration | None, kind: RefKind, role: TypeRole | None) -> None:
        while True:
            ty, j = self.parse_type(self.pos, None, emit=True)
            if ty is None:
                raise self.error(self.pos, "type name")
            path = ty.name.split(".")
            self.emit(kind, path, ty.range.start, ty.range.end, role)
            if decl is not None and kind is RefKind.SUPER_TYPE:
                decl.supertypes.append(ty)
            self.pos = j
            if not self.at_op(","):
                return
            self.pos += 1

    def _type_params(self) -> None:
        close = self.match_angle(self.pos)
        if close is None:
            raise self.error(self.pos, "type parameter list")
        j = self.pos + 1
        while j < close:
            if self.at_id("extends", j) or self.at_op("&", j):
                _, k = self.parse_type(j + 1, TypeRole.OTHER, limit=close)
                j = max(k, j + 1)
            elif self.at_op("@", j):
                _, j = self.parse_annotation(j)
            else:
                j += 1
        self.pos = close + 1

    def _type_decl(self, start: int, mods: set[str], anns: list[AnnotationRef]) -> Declaration:
        if self.at_op("@"):
            self.pos += 2
            kind = DeclKind.INTERFACE
            keyword = "@interface"
        else:
            keyword = self.cur.text
            kind = _TYPE_KEYWORDS[keyword]
            self.pos += 1
        name = self.expect_name(f"{keyword.lstrip('@')} name")
        parent = self.scope
        decl = self.new_decl(kind, name, start, mods, anns)
        decl.in_interface = parent is not None and parent.kind is DeclKind.INTERFACE
        self.scopes.append(decl)
        if self.at_op("<"):
            self._type_params()
        if keyword == "record":
            self._record_components(decl)
        if self.at_id("extends"):
            self.pos += 1
            self._type_list(decl, RefKind.SUPER_TYPE, None)
        if self.at_id("implements"):
            self.pos += 1
            self._type_list(decl, RefKind.SUPER_TYPE, None)
        if self.at_id("permits"):
            self.pos += 1
            self._type_list(None, RefKind.TYPE_USE, TypeRole.OTHER)
        if not self.at_op("{"):
            raise self.error(self.pos, "'{' opening the type body")
        close = self.match_close(self.pos)
        self.pos += 1
        if kind is DeclKind.ENUM:
            self._enum_constants(decl, close)
        self._members(decl, close)
        self.pos = close + 1
        self.scopes.pop()
        self.close_decl(decl, close)
        return decl

    def _record_components(self, decl: Declaration) -> None:
        close = self.match_close(self.pos)
        self.pos += 1
        while self.pos < close:
            first = self.pos
            _, anns = self._modifiers()
            ty_start = self.pos
            ty, j = self.parse_type(self.pos, None, emit=False, limit=close)
            if ty is None:
                raise self.error(self.pos, "record component type")
            self.pos = j
            name = self.expect_name("record component name")
            field = self.new_decl(DeclKind.FIELD, name, first, {"private", "final"}, anns)
            self.scopes.append(field)
            self.parse_type(ty_start, TypeRole.FIELD, limit=close)
            self.scopes.pop()
            field.declared_type = ty
            self.close_decl(field, self.pos - 1)
            if self.at_op(","):
                self.pos += 1
        self.pos = close + 1

    def _enum_constants(self, enum: Declaration, close: int) -> None:
        enum_type = TypeRef(enum.name, enum.name_range)
        while self.pos < close:
            if self.at_op(";"):
                self.pos += 1
                return
            start = self.pos
            _, anns = self._modifiers()
            if not self.is_name(self.pos):
                return
            name = self.cur
            if self.at_op("(", self.pos + 1) or self.at_op(",", self.pos + 1) or \
                    self.at_op(";", self.pos + 1) or self.at_op("{", self.pos + 1) or self.pos + 1 == close:
                pass
            else:
                self.pos = start
                return
            self.pos += 1
            const = self.new_decl(DeclKind.FIELD, name, start, {"public", "static", "final"}, anns)
            const.declared_type = enum_type
            self.scopes.append(const)
            last = self.pos - 1
            if self.at_op("("):
                args_close = self.match_close(self.pos)
                self.scan(self.pos + 1, args_close)
                self.pos = args_close + 1
                last = args_close
            if self.at_op("{"):
                body_close = self.match_close(self.pos)
                self.pos += 1
                self._members(const, body_close)
                self.pos = body_close + 1
                last = body_close
            self.scopes.pop()
            self.close_decl(const, last)
            if self.at_op(","):
                self.pos += 1

    # ------------------------------------------------------------ members

    def _members(self, owner: Declaration, close: int) -> None:
        while self.pos < close:
            if self.at_op(";"):
                self.pos += 1
                continue
            start = self.pos
            mods, anns = self._modifiers()
            if self.at_op("{"):
                block_close = self.match_close(self.pos)
                self.scan(self.pos + 1, block_close)
                self.pos = block_close + 1
                continue
            if self._at_type_keyword():
                self._type_decl(start, mods, anns)
                continue
            tparams = None
            if self.at_op("<"):
                tparams = self.pos
                tp_close = self.match_angle(self.pos)
                if tp_close is None:
                    raise self.error(self.pos, "type parameter list")
                self.pos = tp_close + 1
            if self.at_id(owner.name) and self.at_op("(", self.pos + 1) or (
                    self.at_id(owner.name) and self.at_op("{", self.pos + 1)):
                self._method(owner, start, mods, anns, tparams, None, self.cur)
                continue
            type_i = self.pos
            ty, j = self.parse_type(self.pos, None, emit=False, limit=close)
            if ty is None:
                raise self.error(self.pos, "member declaration")
            self.pos = j
            name = self.expect_name("member name")
            if self.at_op("("):
                self._method(owner, start, mods, anns, tparams, (type_i, ty), name)
            else:
                self._fields(owner, start, mods, anns, type_i, ty, name, close)

    def _method(self, owner: Declaration, start: int, mods: set[str], anns: list[AnnotationRef],
                tparams: int | None, ret: tuple[int, TypeRef] | None, name) -> None:
        ctor = ret is None
        if ctor:
            self.pos += 1
        decl = self.new_decl(DeclKind.FUNCTION, name, start, mods, anns)
        decl.is_constructor = ctor
        decl.in_interface = owner.kind is DeclKind.INTERFACE
        self.scopes.append(decl)
        if tparams is not None:
            saved = self.pos
            self.pos = tparams
            self._type_params()
            self.pos = saved
        if ret is not None:
            type_i, ty = ret
            self.parse_type(type_i, TypeRole.RETURN)
            decl.declared_type = ty
            decl.has_explicit_return_type = True
        last = self.pos - 1
        if self.at_op("("):
            last = self._params(decl)
        while self.at_op("[") and self.at_op("]", self.pos + 1):
            self.pos += 2
        if self.at_id("throws"):
            self.pos += 1
            self._type_list(None, RefKind.TYPE_USE, TypeRole.OTHER)
        if self.at_id("default"):
            self.pos += 1
            end = self._find(";")
            self.scan(self.pos, end)
            self.pos = end
        if self.at_op("{"):
            body_close = self.match_close(self.pos)
            self.scan(self.pos + 1, body_close)
            self.pos = body_close + 1
            last = body_close
        elif self.at_op(";"):
            last = self.pos
            self.pos += 1
        else:
            raise self.error(self.pos, "method body or ';'")
        self.scopes.pop()
        self.close_decl(decl, last)

    def _params(self, decl: Declaration) -> int:
        close = self.match_close(self.pos)
        self.pos += 1
        while self.pos < close:
            first = self.pos
            mods, anns = self._modifiers()
            ty_start = self.pos
            ty, j = self.parse_type(self.pos, None, emit=False, limit=close)
            if ty is None:
                raise self.error(self.pos, "parameter type")
            self.pos = j
            if self.at_id("this"):
                self.pos += 1  # explicit receiver parameter
            else:
                name = self.expect_name("parameter name")
                dims = 0
                while self.at_op("[") and self.at_op("]", self.pos + 1):
                    dims += 1
                    self.pos += 2
                if dims:
                    ty = TypeRef(ty.name, ty.range, ty.nullable, ty.array_dims + dims)
                self.parse_type(ty_start, TypeRole.PARAMETER, limit=close)
                self.new_param(decl, name, first, self.pos - 1, mods, anns, ty)
            if self.at_op(","):
                self.pos += 1
            elif self.pos != close:
                raise self.error(self.pos, "',' or ')' in parameter list")
        self.pos = close + 1
        return close

    def _fields(self, owner: Declaration, start: int, mods: set[str], anns: list[AnnotationRef],
                type_i: int, ty: TypeRef, name, close: int) -> None:
        first = True
        decl_start = start
        while True:
            field = self.new_decl(DeclKind.FIELD, name, decl_start, mods, anns)
            field.in_interface = owner.kind is DeclKind.INTERFACE
            self.scopes.append(field)
            if first:
                self.parse_type(type_i, TypeRole.FIELD, limit=close)
                first = False
            dims = 0
            while self.at_op("[") and self.at_op("]", self.pos + 1):
                dims += 1
                self.pos += 2
            field.declared_type = TypeRef(ty.name, ty.range, ty.nullable, ty.array_dims + dims)
            last = self.pos - 1
            if self.at_op("="):
                init = self.pos + 1
                end = self._find_any((",", ";"), close)
                field.has_initializer = True
                self.scan(init, end)
                self.pos = end
                last = end - 1
            self.scopes.pop()
            if self.at_op(";"):
                self.close_decl(field, self.pos)
                self.pos += 1
                return
            self.close_decl(field, last)
            if not self.at_op(","):
                raise self.error(self.pos, "',' or ';' after field")
            self.pos += 1
            decl_start = self.pos
            name = self.expect_name("field name")

    def _find(self, text: str) -> int:
        return self._find_any((text,), len(self.toks) - 1)

    def _find_any(self, texts: tuple[str, ...], limit: int) -> int:
        j = self.pos
        while j < limit:
            t = self.toks[j]
            if t.kind == OP:
                if t.text in texts:
                    return j
                if t.text in ("(", "[", "{"):
                    j = self.match_close(j)
                elif t.text in (")", "]", "}"):
                    break
            elif t.kind == EOF:
                break
            j += 1
        raise self.error(j, " or ".join(f"'{x}'" for x in texts))

    # ------------------------------------------------------------ bodies

    def scan(self, i: int, end: int, lambda_open: bool = False) -> None:
        toks = self.toks
        locals_ = self.current_locals()
        stmt = True
        parens: list[str] = []
        pending: str | None = None
        while i < end:
            t = toks[i]
            if t.kind == OP:
                x = t.text
                if x == "@":
                    if self.at_id("interface", i + 1):
                        i += 2
                        continue
                    _, i = self.parse_annotation(i)
                    continue
                if x == "(":
                    close = self.match_close(i)
                    if pending is None and close + 1 < end and self.at_op("->", close + 1):
                        self._lambda_params(i + 1, close, locals_)
                        i = close + 2
                        stmt = True
                        continue
                    if pending is None and self._is_cast(i, close):
                        self.parse_type(i + 1, TypeRole.OTHER, limit=close)
                        i = close + 1
                        stmt = False
                        continue
                    if pending == "catch":
                        i = self._catch_param(i, close, locals_)
                        pending = None
                        continue
                    parens.append(pending or "")
                    stmt = pending in ("for", "try")
                    pending = None
                    i += 1
                    continue
                if x == ")":
                    stmt = bool(parens.pop()) if parens else False
                    i += 1
                    continue
                if x in ("{", "}", ";", "->", ":"):
                    stmt = True
                    pending = None
                    i += 1
                    continue
                stmt = False
                i += 1
                continue
            if t.kind != ID:
                stmt = False
                i += 1
                continue
            w = t.text
            if w in _CONTROL:
                pending = w
                stmt = False
                i += 1
                continue
            if w == "catch":
                pending = "catch"
                i += 1
                continue
            if w in ("else", "do", "finally"):
                stmt = True
                i += 1
                continue
            if w in ("break", "continue"):
                i += 2 if self.is_name(i + 1) else 1
                continue
            if w in ("return", "throw", "case", "assert", "default"):
                stmt = False
                i += 1
                continue
            if stmt and w in _LOCAL_MODIFIERS:
                i += 1
                continue
            if stmt and w in ("class", "interface", "enum", "record") and self.is_name(i + 1):
                i = self._local_type_header(i + 1, end)
                continue
            if w == "instanceof":
                ty, j = self.parse_type(i + 1, TypeRole.OTHER, limit=end)
                i = max(j, i + 1)
                if ty is not None and self.is_name(i):
                    locals_[toks[i].text] = LocalVar(toks[i].text, ty)
                    i += 1
                continue
            if stmt:
                j = self._try_local(i, end, locals_)
                if j is not None:
                    i = j
                    stmt = False
                    continue
            if self.is_name(i) and self.at_op("->", i + 1):
                locals_[w] = LocalVar(w)
                i += 2
                stmt = True
                continue
            if stmt and self.is_name(i) and self.at_op(":", i + 1):
                i += 2  # statement label
                continue
            ch = self.parse_chain(i, end)
            if ch is not None and ch.end > i:
                self.emit_chain(ch, locals_)
                i = ch.end
                stmt = False
                continue
            stmt = False
            i += 1

    def _is_cast(self, i: int, close: int) -> bool:
        if close == i + 1:
            return False
        ty, j = self.parse_type(i + 1, None, emit=False, limit=close)
        if ty is None or j != close:
            return False
        nxt = self.tok(close + 1)
        if nxt.kind == ID:
            return nxt.text not in JAVA_KEYWORDS or nxt.text in ("this", "new", "super", "true",
                                                                  "false", "null")
        if nxt.kind == OP:
            return nxt.text in ("(", "!", "~")
        return nxt.kind != EOF

    def _lambda_params(self, i: int, close: int, locals_: dict[str, LocalVar]) -> None:
        j = i
        while j < close:
            k = j
            depth = 0
            while k < close and not (depth == 0 and self.at_op(",", k)):
                if self.at_op("<", k):
                    depth += 1
                elif self.at_op(">", k):
                    depth -= 1
                k += 1
            group_last = k - 1
            if group_last >= j and self.is_name(group_last):
                ty = None
                if group_last > j:
                    start = j
                    while self.at_id("final", start):
                        start += 1
                    ty, _ = self.parse_type(start, TypeRole.OTHER, limit=group_last)
                name = self.toks[group_last].text
                locals_[name] = LocalVar(name, ty)
            j = k + 1

    def _catch_param(self, i: int, close: int, locals_: dict[str, LocalVar]) -> int:
        j = i + 1
        first_type: TypeRef | None = None
        while j < close:
            if self.at_id("final", j) or self.at_op("|", j):
                j += 1
                continue
            if self.at_op("@", j):
                _, j = self.parse_annotation(j)
                continue
            if j == close - 1 and self.is_name(j):
                locals_[self.toks[j].text] = LocalVar(self.toks[j].text, first_type)
                break
            ty, k = self.parse_type(j, TypeRole.OTHER, limit=close - 1)
            if ty is None:
                break
            first_type = first_type or ty
            j = k
        return close + 1

    def _local_type_header(self, i: int, end: int) -> int:
        """Skip a local class header, emitting its supertypes; returns the index of its '{'."""
        j = i + 1
        while j < end and not self.at_op("{", j):
            if self.at_id("extends", j) or self.at_id("implements", j) or self.at_op(",", j):
                ty, k = self.parse_type(j + 1, None, limit=end)
                if ty is not None:
                    self.emit(RefKind.SUPER_TYPE, ty.name.split("."), ty.range.start, ty.range.end)
                    j = k
                    continue
            elif self.at_op("(", j) or self.at_op("<", j):
                close = self.match_close(j) if self.at_op("(", j) else self.match_angle(j, end)
                if close is None:
                    j += 1
                    continue
                j = close + 1
                continue
            j += 1
        return j

    def _try_local(self, i: int, end: int, locals_: dict[str, LocalVar]) -> int | None:
        toks = self.toks
        if self.at_id("var", i) and self.is_name(i + 1) and (
                self.at_op("=", i + 2) or self.at_op(":", i + 2)):
            ty = None
            name_i = i + 1
        else:
            ty, k = self.parse_type(i, None, emit=False, limit=end)
            if ty is None or k == i or not self.is_name(k):
                return None
            name_i = k
            nxt = self.tok(k + 1)
            if nxt.is_op("("):
                return self._local_method_header(i, k, end, locals_)
            if not (nxt.kind == OP and nxt.text in ("=", ";", ",", ":", "[")):
                return None
            self.parse_type(i, TypeRole.LOCAL, limit=end)
        while True:
            name = toks[name_i].text
            j = name_i + 1
            dims = 0
            while self.at_op("[", j) and self.at_op("]", j + 1):
                dims += 1
                j += 2
            vtype = ty if not dims or ty is None else TypeRef(ty.name, ty.range, ty.nullable,
                                                               ty.array_dims + dims)
            if self.at_op("=", j):
                init = j + 1
                init_end = self._initializer_end(init, end)
                origin, created = self.chain_origin(init, init_end)
                locals_[name] = LocalVar(name, vtype, origin, created)
                self.scan(init, init_end)
                j = init_end
            else:
                locals_[name] = LocalVar(name, vtype)
            if self.at_op(",", j) and self.is_name(j + 1) and j + 1 < end:
                name_i = j + 1
                continue
            return j

    def _local_method_header(self, i: int, name_i: int, end: int,
                             locals_: dict[str, LocalVar]) -> int | None:
        """``Type name(...)`` inside an anonymous or local class body: a method header."""
        close = self.match_close(name_i + 1)
        after = self.tok(close + 1)
        if not (after.is_op("{") or after.is_id("throws")):
            return None
        self.parse_type(i, TypeRole.OTHER, limit=end)
        self._lambda_params(name_i + 2, close, locals_)
        return close + 1

    def _initializer_end(self, i: int, end: int) -> int:
        j = i
        while j < end:
            t = self.toks[j]
            if t.kind == OP:
                if t.text in (",", ";"):
                    return j
                if t.text in ("(", "[", "{"):
                    j = self.match_close(j)
                elif t.text in (")", "]", "}"):
                    return j
            j += 1
        return end
