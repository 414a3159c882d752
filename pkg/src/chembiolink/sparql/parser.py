"""Query text to syntax tree, and back.

The tokenizer settles the one real ambiguity up front: '<' opens an IRI
only when a whole <...> form with no whitespace or parentheses follows,
otherwise it is the less-than operator.  pretty() emits prefix-free
query text (full IRIs) so parse(pretty(q)) reproduces the tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .. import namespaces as ns
from ..errors import ParseError, PrefixError
from ..ntriples import escape, unescape
from ..store import Iri, Literal
from .ast import (
    Aggregate, Comparison, Group, OrderKey, Regex, SelectQuery,
    TriplePattern, UnionBlock, Var,
)

_KEYWORDS = {
    "PREFIX", "SELECT", "WHERE", "FILTER", "UNION", "GROUP", "ORDER",
    "BY", "ASC", "DESC", "LIMIT", "AS", "COUNT", "REGEX", "TRUE", "FALSE",
}

_IRIREF_RE = re.compile(r'<([^\s<>"{}|^`\\()]*)>')
_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*")
_LOCAL_RE = re.compile(r"[A-Za-z0-9_.%+-]*")
_VARNAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[+-]?\d+(?:\.\d+)?")

_PUNCT = {"{", "}", "(", ")", ".", ",", "*", "="}

_XSD_SHORT = {
    ns.XSD + "string": "string",
    ns.XSD + "integer": "integer",
    ns.XSD + "decimal": "decimal",
    ns.XSD + "boolean": "boolean",
}


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    value: object
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, bol = 0, 1, 0
    n = len(text)

    def here():
        return line, i - bol + 1

    def fail(msg):
        ln, col = here()
        raise ParseError(msg, line=ln, column=col)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            bol = i
            continue
        if c in " \t\r":
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        ln, col = here()
        if c == "<":
            m = _IRIREF_RE.match(text, i)
            if m:
                tokens.append(_Token("iri", m.group(1), ln, col))
                i = m.end()
            elif text[i:i + 2] == "<=":
                tokens.append(_Token("op", "<=", ln, col))
                i += 2
            else:
                tokens.append(_Token("op", "<", ln, col))
                i += 1
            continue
        if c == ">":
            if text[i:i + 2] == ">=":
                tokens.append(_Token("op", ">=", ln, col))
                i += 2
            else:
                tokens.append(_Token("op", ">", ln, col))
                i += 1
            continue
        if c == "!":
            if text[i:i + 2] != "!=":
                fail("expected '=' after '!'")
            tokens.append(_Token("op", "!=", ln, col))
            i += 2
            continue
        if c == "^":
            if text[i:i + 2] != "^^":
                fail("expected '^^'")
            tokens.append(_Token("dtsep", "^^", ln, col))
            i += 2
            continue
        if c == "=":
            tokens.append(_Token("op", "=", ln, col))
            i += 1
            continue
        if c in _PUNCT:
            tokens.append(_Token(c, c, ln, col))
            i += 1
            continue
        if c in "?$":
            m = _VARNAME_RE.match(text, i + 1)
            if not m:
                fail("expected variable name after '?'")
            tokens.append(_Token("var", m.group(0), ln, col))
            i = m.end()
            continue
        if c == '"':
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == '"':
                    break
                if text[j] == "\n":
                    fail("unterminated string")
                j += 1
            if j >= n:
                fail("unterminated string")
            try:
                tokens.append(_Token("string", unescape(text[i + 1:j]), ln, col))
            except ValueError as e:
                fail(str(e))
            i = j + 1
            continue
        if c.isdigit() or (c in "+-" and i + 1 < n and text[i + 1].isdigit()):
            m = _NUMBER_RE.match(text, i)
            tokens.append(_Token("number", m.group(0), ln, col))
            i = m.end()
            continue
        m = _WORD_RE.match(text, i)
        if m:
            word = m.group(0)
            i = m.end()
            if i < n and text[i] == ":":
                lm = _LOCAL_RE.match(text, i + 1)
                local = lm.group(0)
                end = lm.end()
                # a trailing dot is the statement terminator, not part of
                # the local name
                while local.endswith("."):
                    local = local[:-1]
                    end -= 1
                tokens.append(_Token("pname", (word, local), ln, col))
                i = end
                continue
            upper = word.upper()
            if upper not in _KEYWORDS:
                fail(f"unexpected word {word!r}")
            tokens.append(_Token("kw", upper, ln, col))
            continue
        fail(f"unexpected character {c!r}")
    tokens.append(_Token("eof", None, line, n - bol + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes = dict(ns.PREFIXES)

    # -- token plumbing ------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, msg, tok=None):
        if tok is None:
            tok = self.tokens[min(self.pos, len(self.tokens) - 1)]
        raise ParseError(msg, line=tok.line, column=tok.column)

    def accept_kw(self, word) -> bool:
        tok = self.peek()
        if tok.kind == "kw" and tok.value == word:
            self.pos += 1
            return True
        return False

    def expect_kw(self, word):
        if not self.accept_kw(word):
            self.fail(f"expected {word}")

    def accept(self, kind) -> _Token | None:
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind) -> _Token:
        tok = self.accept(kind)
        if tok is None:
            self.fail(f"expected {kind!r}")
        return tok

    # -- grammar ---------------------------------------------------------

    def query(self) -> SelectQuery:
        while self.accept_kw("PREFIX"):
            tok = self.expect("pname")
            prefix, local = tok.value
            if local:
                self.fail("prefix declaration must end with ':'", tok)
            iri = self.expect("iri")
            self.prefixes[prefix] = iri.value
        self.expect_kw("SELECT")
        select = self.select_items()
        self.expect_kw("WHERE")
        where = self.group()
        group_by: tuple[Var, ...] = ()
        if self.accept_kw("GROUP"):
            self.expect_kw("BY")
            group_by = self.var_list("GROUP BY")
        order_by: list[OrderKey] = []
        if self.accept_kw("ORDER"):
            self.expect_kw("BY")
            while True:
                tok = self.peek()
                if tok.kind == "var":
                    order_by.append(OrderKey(Var(self.next().value)))
                elif tok.kind == "kw" and tok.value in ("ASC", "DESC"):
                    self.next()
                    self.expect("(")
                    v = Var(self.expect("var").value)
                    self.expect(")")
                    order_by.append(OrderKey(v, descending=tok.value == "DESC"))
                else:
                    break
            if not order_by:
                self.fail("expected sort key after ORDER BY")
        limit = None
        if self.accept_kw("LIMIT"):
            tok = self.expect("number")
            if "." in tok.value or tok.value.startswith("-"):
                self.fail("LIMIT takes a non-negative integer", tok)
            limit = int(tok.value)
        self.expect("eof")
        q = SelectQuery(select, where, group_by, tuple(order_by), limit)
        self.validate(q)
        return q

    def select_items(self) -> tuple:
        if self.accept("*"):
            return ()
        items: list = []
        while True:
            tok = self.peek()
            if tok.kind == "var":
                items.append(Var(self.next().value))
            elif tok.kind == "(":
                self.next()
                self.expect_kw("COUNT")
                self.expect("(")
                if self.accept("*"):
                    var = None
                else:
                    var = Var(self.expect("var").value)
                self.expect(")")
                self.expect_kw("AS")
                alias = Var(self.expect("var").value)
                self.expect(")")
                items.append(Aggregate(var, alias))
            else:
                break
        if not items:
            self.fail("expected '*' or at least one projection")
        return tuple(items)

    def var_list(self, clause) -> tuple[Var, ...]:
        out = []
        while self.peek().kind == "var":
            out.append(Var(self.next().value))
        if not out:
            self.fail(f"expected variable after {clause}")
        return tuple(out)

    def group(self) -> Group:
        self.expect("{")
        elements: list = []
        while True:
            tok = self.peek()
            if tok.kind == "}":
                self.next()
                return Group(tuple(elements))
            if tok.kind == "eof":
                self.fail("unterminated group")
            if tok.kind == "kw" and tok.value == "FILTER":
                self.next()
                elements.append(self.filter_expr())
                self.accept(".")  # trailing dot after a filter is tolerated
            elif tok.kind == "{":
                branches = [self.group()]
                while self.accept_kw("UNION"):
                    branches.append(self.group())
                if len(branches) == 1:
                    # a lone nested group is just an inline join
                    elements.extend(branches[0].elements)
                else:
                    elements.append(UnionBlock(tuple(branches)))
                self.accept(".")
            else:
                elements.append(self.triple_pattern())

    def triple_pattern(self) -> TriplePattern:
        s = self.pattern_term()
        p = self.pattern_term()
        o = self.pattern_term()
        if not self.accept(".") and self.peek().kind != "}":
            self.fail("expected '.' after triple pattern")
        return TriplePattern(s, p, o)

    def pattern_term(self):
        tok = self.next()
        if tok.kind == "var":
            return Var(tok.value)
        if tok.kind == "iri":
            return Iri(tok.value)
        if tok.kind == "pname":
            return Iri(self.expand_pname(tok))
        if tok.kind == "string":
            return self.typed_literal(tok.value)
        if tok.kind == "number":
            return Literal(tok.value, "decimal" if "." in tok.value else "integer")
        if tok.kind == "kw" and tok.value in ("TRUE", "FALSE"):
            return Literal(tok.value.lower(), "boolean")
        self.fail("expected term", tok)

    def expand_pname(self, tok) -> str:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise PrefixError(f"unknown prefix {prefix!r}",
                              line=tok.line, column=tok.column)
        return self.prefixes[prefix] + local

    def typed_literal(self, lexical: str) -> Literal:
        if not self.accept("dtsep"):
            return Literal(lexical, "string")
        tok = self.next()
        if tok.kind == "iri":
            dt_iri = tok.value
        elif tok.kind == "pname":
            dt_iri = self.expand_pname(tok)
        else:
            self.fail("expected datatype after '^^'", tok)
        if dt_iri not in _XSD_SHORT:
            self.fail(f"unsupported datatype <{dt_iri}>", tok)
        return Literal(lexical, _XSD_SHORT[dt_iri])

    def filter_expr(self):
        # FILTER regex(...) or FILTER (<operand> <op> <operand>),
        # with the regex call also allowed inside the parentheses
        if self.accept_kw("REGEX"):
            return self.regex_call()
        self.expect("(")
        if self.accept_kw("REGEX"):
            expr = self.regex_call()
            self.expect(")")
            return expr
        left = self.pattern_term()
        op_tok = self.expect("op")
        right = self.pattern_term()
        self.expect(")")
        return Comparison(left, op_tok.value, right)

    def regex_call(self) -> Regex:
        self.expect("(")
        var = Var(self.expect("var").value)
        self.expect(",")
        pattern = self.expect("string").value
        flags = ""
        if self.accept(","):
            tok = self.expect("string")
            if tok.value not in ("", "i"):
                self.fail(f"unsupported regex flags {tok.value!r}", tok)
            flags = tok.value
        self.expect(")")
        try:
            re.compile(pattern)
        except re.error as e:
            self.fail(f"bad regex pattern: {e}")
        return Regex(var, pattern, flags)

    def validate(self, q: SelectQuery):
        has_agg = any(isinstance(item, Aggregate) for item in q.select)
        if q.group_by and q.select_all:
            self.fail("SELECT * cannot be combined with GROUP BY")
        if q.group_by or has_agg:
            allowed = set(q.group_by)
            for item in q.select:
                if isinstance(item, Var) and item not in allowed:
                    self.fail(f"{item} must appear in GROUP BY to be selected")
        seen: set[str] = set()
        for name in _output_names(q):
            if name in seen:
                self.fail(f"duplicate output column ?{name}")
            seen.add(name)


def _output_names(q: SelectQuery) -> list[str]:
    if q.select_all:
        return [v.name for v in q.where.variables()]
    return [item.alias.name if isinstance(item, Aggregate) else item.name
            for item in q.select]


def parse(text: str) -> SelectQuery:
    """Parse SELECT query text; raises ParseError with position on bad input."""
    return _Parser(text).query()


# -- pretty printing ------------------------------------------------------

def _term_text(term) -> str:
    if isinstance(term, Var):
        return str(term)
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if term.datatype == "string":
        return f'"{escape(term.lexical)}"'
    if term.datatype == "boolean":
        return term.lexical
    return term.lexical  # integer / decimal lexical parses back as-is


def _element_lines(el, depth: int) -> list[str]:
    pad = "  " * depth
    if isinstance(el, TriplePattern):
        return [f"{pad}{_term_text(el.subject)} {_term_text(el.predicate)} "
                f"{_term_text(el.object)} ."]
    if isinstance(el, Comparison):
        return [f"{pad}FILTER ({_term_text(el.left)} {el.op} "
                f"{_term_text(el.right)})"]
    if isinstance(el, Regex):
        args = f'{el.var}, "{escape(el.pattern)}"'
        if el.flags:
            args += f', "{el.flags}"'
        return [f"{pad}FILTER regex({args})"]
    lines: list[str] = []
    for k, branch in enumerate(el.branches):
        lines.append(pad + ("{" if k == 0 else "UNION {"))
        for sub in branch.elements:
            lines.extend(_element_lines(sub, depth + 1))
        lines.append(pad + "}")
    return lines


def pretty(q: SelectQuery) -> str:
    """Render a query as prefix-free text; parse(pretty(q)) == q."""
    if q.select_all:
        head = "SELECT *"
    else:
        parts = []
        for item in q.select:
            if isinstance(item, Aggregate):
                inner = str(item.var) if item.var else "*"
                parts.append(f"(COUNT({inner}) AS {item.alias})")
            else:
                parts.append(str(item))
        head = "SELECT " + " ".join(parts)
    lines = [head, "WHERE {"]
    for el in q.where.elements:
        lines.extend(_element_lines(el, 1))
    lines.append("}")
    if q.group_by:
        lines.append("GROUP BY " + " ".join(str(v) for v in q.group_by))
    if q.order_by:
        keys = [f"DESC({k.var})" if k.descending else str(k.var)
                for k in q.order_by]
        lines.append("ORDER BY " + " ".join(keys))
    if q.limit is not None:
        lines.append(f"LIMIT {q.limit}")
    return "\n".join(lines) + "\n"
