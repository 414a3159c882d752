"""Line-oriented triple serialization.

One statement per line: `<s> <p> <o> .` where the object is either an
IRI or a typed literal `"lexical"^^<datatype>`.  Only the four scalar
XSD datatypes are accepted.  serialize() writes explicit datatypes and
sorts lines, so export -> parse -> export is byte-identical.
"""

from __future__ import annotations

from .errors import BadIri, BadLiteral, ParseError
from .namespaces import XSD

_XSD_SHORT = {
    XSD + "string": "string",
    XSD + "integer": "integer",
    XSD + "decimal": "decimal",
    XSD + "boolean": "boolean",
}

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


def escape(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


def unescape(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        if i + 1 >= len(text) or text[i + 1] not in _UNESCAPES:
            raise ValueError(f"bad escape at offset {i} in {text!r}")
        out.append(_UNESCAPES[text[i + 1]])
        i += 2
    return "".join(out)


class _LineScanner:
    def __init__(self, line: str, lineno: int):
        self.line = line
        self.lineno = lineno
        self.pos = 0

    def fail(self, message: str):
        raise ParseError(message, line=self.lineno, column=self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.line) and self.line[self.pos] in " \t":
            self.pos += 1

    def take_iri(self) -> str:
        if self.pos >= len(self.line) or self.line[self.pos] != "<":
            self.fail("expected '<'")
        end = self.line.find(">", self.pos + 1)
        if end < 0:
            self.fail("unterminated IRI")
        iri = self.line[self.pos + 1:end]
        self.pos = end + 1
        return iri

    def take_lexical(self) -> str:
        # caller has seen the opening quote
        start = self.pos
        end = self.pos + 1
        while end < len(self.line):
            c = self.line[end]
            if c == "\\":
                end += 2
                continue
            if c == '"':
                raw = self.line[start + 1:end]
                self.pos = end + 1
                try:
                    return unescape(raw)
                except ValueError as e:
                    self.fail(str(e))
            end += 1
        self.fail("unterminated literal")


def parse_line(line: str, lineno: int = 1):
    """Parse one statement line into (subject, predicate, object) or None."""
    from .store import Iri, Literal  # deferred: store imports this module

    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    sc = _LineScanner(line, lineno)
    sc.skip_ws()
    try:
        subject = Iri(sc.take_iri())
        sc.skip_ws()
        predicate = Iri(sc.take_iri())
        sc.skip_ws()
        if sc.pos < len(sc.line) and sc.line[sc.pos] == "<":
            obj = Iri(sc.take_iri())
        elif sc.pos < len(sc.line) and sc.line[sc.pos] == '"':
            lexical = sc.take_lexical()
            datatype = "string"
            if sc.line[sc.pos:sc.pos + 2] == "^^":
                sc.pos += 2
                dt_iri = sc.take_iri()
                if dt_iri not in _XSD_SHORT:
                    sc.fail(f"unsupported datatype <{dt_iri}>")
                datatype = _XSD_SHORT[dt_iri]
            obj = Literal(lexical, datatype)
        else:
            sc.fail("expected IRI or literal object")
    except (BadIri, BadLiteral) as e:
        raise ParseError(str(e), line=lineno) from None
    sc.skip_ws()
    if sc.pos >= len(sc.line) or sc.line[sc.pos] != ".":
        sc.fail("expected terminating '.'")
    sc.pos += 1
    sc.skip_ws()
    if sc.pos != len(sc.line.rstrip("\r\n")):
        sc.fail("trailing content after '.'")
    return subject, predicate, obj


def parse(doc: str):
    """Yield (subject, predicate, object) per statement line of a document.

    Lines are delimited by '\\n' only; escapes keep every other character
    inside its statement line.
    """
    for lineno, line in enumerate(doc.split("\n"), start=1):
        parsed = parse_line(line, lineno)
        if parsed is not None:
            yield parsed


def format_term(term) -> str:
    from .store import Iri

    if isinstance(term, Iri):
        return f"<{term.value}>"
    return f'"{escape(term.lexical)}"^^<{XSD}{term.datatype}>'


def format_triple(s, p, o) -> str:
    return f"{format_term(s)} {format_term(p)} {format_term(o)} ."


def serialize(triples) -> str:
    """Render unique statements, one per line, sorted; '' when empty."""
    lines = sorted({format_triple(s, p, o) for s, p, o in triples})
    return "".join(line + "\n" for line in lines)
