"""Parsers for N-Triples, N-Quads, and a Turtle subset.

The Turtle subset covers what the generated ontologies and fixtures need:
`@prefix` / `@base` directives, prefixed names, `<...>` IRIs, `a`, labeled
blank nodes, string literals with `^^datatype` / `@lang`, and `;` / `,`
predicate/object lists. No collections, no anonymous `[]` nodes, no numeric
or boolean shorthand, no quoted triples.

Blank node labels are relabeled canonically (`_:b0`, `_:b1`, ... in first
occurrence order) at parse time so round-trips are deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urljoin

from .terms import BlankNode, Graph, Iri, Literal, Quad, Term, Triple, XSD_STRING


class ParseError(ValueError):
    """Syntax error with 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


class RelativeIriError(ParseError):
    """A relative IRI reference was found and no base IRI is in effect."""


NTRIPLES = "ntriples"
NQUADS = "nquads"
TURTLE = "turtle"

_FORMAT_ALIASES = {
    "ntriples": NTRIPLES, "nt": NTRIPLES,
    "nquads": NQUADS, "nq": NQUADS,
    "turtle": TURTLE, "ttl": TURTLE,
}


def normalize_format(fmt: str) -> str:
    try:
        return _FORMAT_ALIASES[fmt.lower()]
    except KeyError:
        raise ValueError(f"unknown RDF format: {fmt!r} (expected ntriples, nquads, or turtle)")


# --- tokenizer -------------------------------------------------------------

IRIREF = "IRIREF"
PNAME = "PNAME"
BLANK = "BLANK"
STRING = "STRING"
LANGTAG = "LANGTAG"
CARETS = "^^"
DOT = "."
SEMI = ";"
COMMA = ","
KW_A = "a"
PREFIX_DIRECTIVE = "@prefix"
BASE_DIRECTIVE = "@base"
EOF = "EOF"

_PN_LOCAL_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-")
_WS = " \t\r\n"


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int
    extra: str = ""  # prefix part of a PNAME


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def _skip_ws_and_comments(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in _WS:
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def next_token(self) -> Token:
        self._skip_ws_and_comments()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return Token(EOF, "", line, col)
        ch = self._peek()

        if ch == "<":
            return self._iriref(line, col)
        if ch == '"':
            return self._string(line, col)
        if ch == "_" and self._peek(1) == ":":
            return self._blank(line, col)
        if ch == "@":
            return self._at_word(line, col)
        if ch == "^" and self._peek(1) == "^":
            self._advance(2)
            return Token(CARETS, "^^", line, col)
        if ch in ".;,":
            # A '.' can also start a malformed pname; treat bare '.' as terminator.
            self._advance()
            return Token({".": DOT, ";": SEMI, ",": COMMA}[ch], ch, line, col)
        return self._pname_or_keyword(line, col)

    def _iriref(self, line: int, col: int) -> Token:
        self._advance()  # <
        out: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise ParseError("unterminated IRI", line, col)
            ch = self._peek()
            if ch == ">":
                self._advance()
                return Token(IRIREF, "".join(out), line, col)
            if ch in "\n\r":
                raise ParseError("newline inside IRI", self.line, self.col)
            if ch == "\\":
                out.append(self._uchar())
                continue
            if ch in ' "<{}|^`':
                raise self._error(f"forbidden character {ch!r} in IRI")
            out.append(ch)
            self._advance()

    def _uchar(self) -> str:
        # at backslash; supports \uXXXX and \UXXXXXXXX
        start_line, start_col = self.line, self.col
        self._advance()
        kind = self._peek()
        width = {"u": 4, "U": 8}.get(kind)
        if width is None:
            raise ParseError(f"unsupported escape \\{kind}", start_line, start_col)
        self._advance()
        digits = self.text[self.pos : self.pos + width]
        if len(digits) < width or any(d not in "0123456789abcdefABCDEF" for d in digits):
            raise ParseError("malformed \\u escape", start_line, start_col)
        self._advance(width)
        return chr(int(digits, 16))

    def _string(self, line: int, col: int) -> Token:
        self._advance()  # opening quote
        out: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise ParseError("unterminated string literal", line, col)
            ch = self._peek()
            if ch == '"':
                self._advance()
                return Token(STRING, "".join(out), line, col)
            if ch in "\n\r":
                raise ParseError("newline inside string literal", self.line, self.col)
            if ch == "\\":
                nxt = self._peek(1)
                simple = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
                          '"': '"', "'": "'", "\\": "\\"}
                if nxt in simple:
                    out.append(simple[nxt])
                    self._advance(2)
                elif nxt in "uU":
                    out.append(self._uchar())
                else:
                    raise self._error(f"unsupported escape \\{nxt}")
                continue
            out.append(ch)
            self._advance()

    def _blank(self, line: int, col: int) -> Token:
        self._advance(2)  # _:
        out: list[str] = []
        while self._peek() and self._peek() in _PN_LOCAL_CHARS:
            out.append(self._peek())
            self._advance()
        label = "".join(out)
        # back off trailing dots: they terminate the statement
        while label.endswith("."):
            label = label[:-1]
            self.pos -= 1
            self.col -= 1
        if not label:
            raise ParseError("empty blank node label", line, col)
        return Token(BLANK, label, line, col)

    def _at_word(self, line: int, col: int) -> Token:
        self._advance()  # @
        out: list[str] = []
        while self._peek() and (self._peek().isalnum() or self._peek() == "-"):
            out.append(self._peek())
            self._advance()
        word = "".join(out)
        if word == "prefix":
            return Token(PREFIX_DIRECTIVE, "@prefix", line, col)
        if word == "base":
            return Token(BASE_DIRECTIVE, "@base", line, col)
        return Token(LANGTAG, word, line, col)

    def _pname_or_keyword(self, line: int, col: int) -> Token:
        out: list[str] = []
        while self._peek() in _PN_LOCAL_CHARS or self._peek() == ":":
            ch = self._peek()
            out.append(ch)
            self._advance()
            if ch == ":":
                break
        prefix = "".join(out)
        if not prefix:
            raise self._error(f"unexpected character {self._peek()!r}")
        if prefix == "a":
            return Token(KW_A, "a", line, col)
        if not prefix.endswith(":"):
            raise ParseError(f"expected ':' in prefixed name, got {prefix!r}", line, col)
        local_chars: list[str] = []
        while self._peek() and self._peek() in _PN_LOCAL_CHARS:
            local_chars.append(self._peek())
            self._advance()
        local = "".join(local_chars)
        while local.endswith("."):
            local = local[:-1]
            self.pos -= 1
            self.col -= 1
        return Token(PNAME, local, line, col, extra=prefix[:-1])


# --- parser ----------------------------------------------------------------

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:")
_LANGTAG_RE = re.compile(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$")


class _Parser:
    """Shared statement parser. Strict mode (N-Triples/N-Quads) disallows
    directives, prefixed names, `a`, `;`/`,` lists, and relative IRIs."""

    def __init__(self, text: str, *, strict: bool, quads: bool, base: str | None = None):
        self.lexer = _Lexer(text)
        self.strict = strict
        self.quads = quads
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.token = self.lexer.next_token()
        self.quad_list: list[Quad] = []
        self._blank_map: dict[str, BlankNode] = {}

    def _advance(self) -> None:
        self.token = self.lexer.next_token()

    def _error(self, message: str, token: Token | None = None) -> ParseError:
        tok = token or self.token
        return ParseError(message, tok.line, tok.column)

    def _expect(self, kind: str) -> Token:
        if self.token.kind != kind:
            raise self._error(f"expected {kind}, got {self.token.kind} {self.token.value!r}")
        tok = self.token
        self._advance()
        return tok

    def _resolve_iri(self, ref: str, token: Token) -> Iri:
        if not _SCHEME_RE.match(ref):
            if self.base is None:
                raise RelativeIriError(
                    f"relative IRI {ref!r} with no base", token.line, token.column
                )
            ref = urljoin(self.base, ref)
        try:
            return Iri(ref)
        except ValueError as exc:
            raise self._error(str(exc), token)

    def _blank_node(self, label: str) -> BlankNode:
        node = self._blank_map.get(label)
        if node is None:
            node = BlankNode(f"b{len(self._blank_map)}")
            self._blank_map[label] = node
        return node

    def _term(self, position: str) -> Term:
        tok = self.token
        if tok.kind == IRIREF:
            self._advance()
            return self._resolve_iri(tok.value, tok)
        if tok.kind == BLANK:
            self._advance()
            return self._blank_node(tok.value)
        if tok.kind == PNAME:
            if self.strict:
                raise self._error("prefixed names are not allowed in this format")
            ns = self.prefixes.get(tok.extra)
            if ns is None:
                raise self._error(f"undefined prefix {tok.extra + ':'!r}")
            self._advance()
            return self._resolve_iri(ns + tok.value, tok)
        if tok.kind == STRING:
            self._advance()
            if self.token.kind == LANGTAG:
                lang = self.token.value
                if not _LANGTAG_RE.match(lang):
                    raise self._error(f"malformed language tag @{lang}")
                self._advance()
                return Literal(tok.value, language=lang)
            if self.token.kind == CARETS:
                self._advance()
                dt_tok = self.token
                if dt_tok.kind == IRIREF:
                    self._advance()
                    dt = self._resolve_iri(dt_tok.value, dt_tok)
                elif dt_tok.kind == PNAME and not self.strict:
                    dt = self._term("datatype")  # reuse PNAME path
                else:
                    raise self._error("expected datatype IRI after ^^")
                if not isinstance(dt, Iri):
                    raise self._error("datatype must be an IRI", dt_tok)
                return Literal(tok.value, datatype=dt)
            return Literal(tok.value, datatype=XSD_STRING)
        if tok.kind == KW_A:
            if self.strict or position != "predicate":
                raise self._error(f"expected {position} term, got {tok.kind} {tok.value!r}")
            self._advance()
            from .terms import RDF_TYPE

            return RDF_TYPE
        raise self._error(f"expected {position} term, got {tok.kind} {tok.value!r}")

    def _directive(self) -> None:
        if self.token.kind == PREFIX_DIRECTIVE:
            self._advance()
            name_tok = self._expect(PNAME)
            if name_tok.value:
                raise self._error("expected bare prefix (e.g. ex:) in @prefix", name_tok)
            iri_tok = self._expect(IRIREF)
            self.prefixes[name_tok.extra] = self._resolve_iri(iri_tok.value, iri_tok).value
            self._expect(DOT)
        else:
            self._advance()
            iri_tok = self._expect(IRIREF)
            self.base = self._resolve_iri(iri_tok.value, iri_tok).value
            self._expect(DOT)

    def _statement(self) -> None:
        subj_tok = self.token
        subject = self._term("subject")
        if isinstance(subject, Literal):
            raise self._error("subject must not be a literal", subj_tok)
        seen_pairs: list[tuple[Term, Term]] = []
        while True:
            pred_tok = self.token
            predicate = self._term("predicate")
            if not isinstance(predicate, Iri):
                raise self._error("predicate must be an IRI", pred_tok)
            while True:
                seen_pairs.append((predicate, self._term("object")))
                if not self.strict and self.token.kind == COMMA:
                    self._advance()
                    continue
                break
            if not self.strict and self.token.kind == SEMI:
                self._advance()
                if self.token.kind == DOT:  # trailing semicolon
                    break
                continue
            break
        graph_name: Iri | None = None
        if self.quads and self.token.kind != DOT:
            g_tok = self.token
            graph_term = self._term("graph label")
            if not isinstance(graph_term, Iri):
                raise self._error("graph label must be an IRI", g_tok)
            graph_name = graph_term
        self._expect(DOT)
        for predicate, obj in seen_pairs:
            self.quad_list.append(Quad(subject, predicate, obj, graph_name))

    def run(self) -> list[Quad]:
        while self.token.kind != EOF:
            if self.token.kind in (PREFIX_DIRECTIVE, BASE_DIRECTIVE):
                if self.strict:
                    raise self._error("directives are not allowed in this format")
                self._directive()
            else:
                self._statement()
        return self.quad_list


def _decode(document: str | bytes) -> str:
    if isinstance(document, bytes):
        try:
            return document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc.reason}", 1, 1)
    return document


def parse_ntriples(document: str | bytes) -> Graph:
    quads = _Parser(_decode(document), strict=True, quads=False).run()
    return Graph(q.triple() for q in quads)


def parse_nquads(document: str | bytes) -> list[Graph]:
    """Parse N-Quads into one Graph per graph label (default graph first)."""
    quads = _Parser(_decode(document), strict=True, quads=True).run()
    by_name: dict[Iri | None, set[Triple]] = {}
    for q in quads:
        by_name.setdefault(q.graph, set()).add(q.triple())
    names = sorted(by_name, key=lambda n: ("" if n is None else n.value))
    return [Graph(by_name[name], name=name) for name in names]


def parse_turtle(document: str | bytes, base: str | None = None) -> Graph:
    quads = _Parser(_decode(document), strict=False, quads=False, base=base).run()
    return Graph(q.triple() for q in quads)


def parse(document: str | bytes, fmt: str, base: str | None = None) -> Graph | list[Graph]:
    """Parse a document in the named format.

    Returns a Graph, or a list of named Graphs for N-Quads.
    """
    fmt = normalize_format(fmt)
    if fmt == NTRIPLES:
        return parse_ntriples(document)
    if fmt == NQUADS:
        return parse_nquads(document)
    return parse_turtle(document, base=base)
