"""N-Triples and Turtle emission and parsing.

Output is byte-stable: statements are sorted lexicographically by the
rendered (subject, predicate, object), so identical graphs always serialize
identically and text diffs stay meaningful. The Turtle reader handles the
subset this package emits plus ';' and ',' continuation groups.
"""

from __future__ import annotations

import re

from ..errors import ParseError
from .graph import Graph, Namespaces
from .terms import (
    OWL_NS,
    OWL_SAMEAS,
    RDF_NS,
    RDF_TYPE,
    XSD_NS,
    DT_TEXT,
    Iri,
    Literal,
    Term,
    Triple,
)
from .vocab import Vocabulary

_PN_LOCAL = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")


# --- escaping -----------------------------------------------------------------

def _escape(lexical: str) -> str:
    out = []
    for ch in lexical:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _unescape(raw: str, line: int) -> str:
    out = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(raw):
            raise ParseError("dangling escape", line)
        nxt = raw[i + 1]
        simple = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}
        if nxt in simple:
            out.append(simple[nxt])
            i += 2
        elif nxt == "u":
            out.append(chr(int(raw[i + 2 : i + 6], 16)))
            i += 6
        elif nxt == "U":
            out.append(chr(int(raw[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise ParseError(f"bad escape \\{nxt}", line)
    return "".join(out)


# --- N-Triples -------------------------------------------------------------------

def _nt_term(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.rendered}>"
    if term.datatype == DT_TEXT:
        return f'"{_escape(term.lexical)}"'
    return f'"{_escape(term.lexical)}"^^<{term.datatype.rendered}>'


def _all_statements(graph: Graph) -> list[Triple]:
    rows = list(graph.triples)
    rows.extend(Triple(a, OWL_SAMEAS, b) for a, b in graph.sameas_pairs)
    rows.sort(key=Triple.sort_key)
    return rows


def emit_ntriples(graph: Graph) -> bytes:
    lines = [
        f"{_nt_term(t.subject)} {_nt_term(t.predicate)} {_nt_term(t.object)} ."
        for t in _all_statements(graph)
    ]
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


_NT_LINE = re.compile(
    r"^<([^>]*)>\s+<([^>]*)>\s+"
    r'(?:<([^>]*)>|"((?:[^"\\]|\\.)*)"(?:\^\^<([^>]*)>)?)'
    r"\s*\.\s*$"
)


def parse_ntriples(data: bytes, vocabulary: Vocabulary | None = None,
                   namespaces: Namespaces | None = None) -> Graph:
    graph = Graph(vocabulary, namespaces)
    for lineno, raw in enumerate(data.decode("utf-8").split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _NT_LINE.match(line)
        if not m:
            raise ParseError("not a valid N-Triples statement", lineno)
        subject_txt, predicate_txt, obj_iri, obj_lex, obj_dt = m.groups()
        try:
            subject = Iri.from_string(subject_txt)
            predicate = Iri.from_string(predicate_txt)
            if obj_iri is not None:
                obj: Term = Iri.from_string(obj_iri)
            else:
                dt = Iri.from_string(obj_dt) if obj_dt else DT_TEXT
                obj = Literal(_unescape(obj_lex, lineno), dt)
            graph.add(subject, predicate, obj)
        except (ValueError, ParseError) as exc:
            raise ParseError(str(exc), lineno) from exc
    return graph


# --- Turtle ----------------------------------------------------------------------------

_BASE_PREFIXES = {
    "rdf": RDF_NS,
    "owl": OWL_NS,
    "xsd": XSD_NS,
}


def _turtle_prefixes(namespaces: Namespaces) -> dict[str, str]:
    prefixes = dict(_BASE_PREFIXES)
    prefixes["oc"] = namespaces.vocab
    prefixes["ind"] = namespaces.instance
    return prefixes


def _ttl_iri(iri: Iri, by_ns: dict[str, str]) -> str:
    if iri == RDF_TYPE:
        return "a"
    prefix = by_ns.get(iri.namespace)
    if prefix is not None and _PN_LOCAL.match(iri.local_name):
        return f"{prefix}:{iri.local_name}"
    return f"<{iri.rendered}>"


def _ttl_term(term: Term, by_ns: dict[str, str]) -> str:
    if isinstance(term, Iri):
        return _ttl_iri(term, by_ns)
    if term.datatype == DT_TEXT:
        return f'"{_escape(term.lexical)}"'
    return f'"{_escape(term.lexical)}"^^{_ttl_iri(term.datatype, by_ns)}'


def emit_turtle(graph: Graph) -> bytes:
    prefixes = _turtle_prefixes(graph.namespaces)
    by_ns = {ns: pfx for pfx, ns in prefixes.items()}
    lines = [f"@prefix {pfx}: <{ns}> ." for pfx, ns in sorted(prefixes.items())]
    statements = _all_statements(graph)
    if statements:
        lines.append("")
    for t in statements:
        subject = _ttl_iri(t.subject, by_ns)
        # 'a' is only valid in the predicate position
        if subject == "a":
            subject = f"<{t.subject.rendered}>"
        lines.append(f"{subject} {_ttl_iri(t.predicate, by_ns)} {_ttl_term(t.object, by_ns)} .")
    return ("\n".join(lines) + "\n").encode("utf-8")


_TOKEN = re.compile(
    r"""(?:
        (?P<iriref><[^>]*>) |
        (?P<string>"(?:[^"\\]|\\.)*") |
        (?P<dtsep>\^\^) |
        (?P<punct>[.;,]) |
        (?P<prefixdecl>@prefix) |
        (?P<pname>[A-Za-z][A-Za-z0-9_-]*)?:(?P<plocal>[A-Za-z_][A-Za-z0-9_-]*)? |
        (?P<a_kw>a)(?![A-Za-z0-9_-])
    )""",
    re.VERBOSE,
)


class _TurtleLexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1

    def _skip_blank(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "#":
                end = self.text.find("\n", self.pos)
                self.pos = len(self.text) if end < 0 else end
            elif ch.isspace():
                if ch == "\n":
                    self.line += 1
                self.pos += 1
            else:
                return

    def next_token(self) -> tuple[str, str] | None:
        self._skip_blank()
        if self.pos >= len(self.text):
            return None
        m = _TOKEN.match(self.text, self.pos)
        if not m or m.end() == self.pos:
            raise ParseError(f"unexpected character {self.text[self.pos]!r}", self.line)
        self.line += self.text.count("\n", self.pos, m.end())
        self.pos = m.end()
        if m.group("iriref"):
            return ("iri", m.group("iriref")[1:-1])
        if m.group("string") is not None:
            return ("string", m.group("string")[1:-1])
        if m.group("dtsep"):
            return ("dtsep", "^^")
        if m.group("punct"):
            return ("punct", m.group("punct"))
        if m.group("prefixdecl"):
            return ("prefixdecl", "@prefix")
        if m.group("a_kw"):
            return ("a", "a")
        # prefixed name (either part may be empty only for the prefix decl)
        pfx = m.group("pname") or ""
        local = m.group("plocal") or ""
        return ("pname", f"{pfx}:{local}")


def parse_turtle(data: bytes, vocabulary: Vocabulary | None = None) -> Graph:
    text = data.decode("utf-8")
    lexer = _TurtleLexer(text)
    prefixes: dict[str, str] = {}

    def resolve(kind: str, value: str, line: int) -> Iri:
        if kind == "iri":
            try:
                return Iri.from_string(value)
            except ValueError as exc:
                raise ParseError(str(exc), line) from exc
        if kind == "a":
            return RDF_TYPE
        pfx, _, local = value.partition(":")
        if pfx not in prefixes:
            raise ParseError(f"unknown prefix {pfx!r}", line)
        if not local:
            raise ParseError("prefixed name with empty local part", line)
        return Iri(prefixes[pfx], local)

    namespaces = None
    pending: list[tuple[Iri, Iri, Term]] = []

    token = lexer.next_token()
    while token is not None:
        if token[0] == "prefixdecl":
            name_tok = lexer.next_token()
            iri_tok = lexer.next_token()
            dot_tok = lexer.next_token()
            if (
                name_tok is None or name_tok[0] != "pname"
                or iri_tok is None or iri_tok[0] != "iri"
                or dot_tok != ("punct", ".")
            ):
                raise ParseError("malformed @prefix declaration", lexer.line)
            prefixes[name_tok[1].rstrip(":").partition(":")[0]] = iri_tok[1]
            token = lexer.next_token()
            continue

        subject = resolve(token[0], token[1], lexer.line)
        # predicate-object groups separated by ';', objects by ','
        while True:
            pred_tok = lexer.next_token()
            if pred_tok is None:
                raise ParseError("statement ends before predicate", lexer.line)
            predicate = resolve(pred_tok[0], pred_tok[1], lexer.line)
            while True:
                obj_tok = lexer.next_token()
                if obj_tok is None:
                    raise ParseError("statement ends before object", lexer.line)
                if obj_tok[0] == "string":
                    lex = _unescape(obj_tok[1], lexer.line)
                    after = lexer.next_token()
                    if after == ("dtsep", "^^"):
                        dt_tok = lexer.next_token()
                        if dt_tok is None or dt_tok[0] not in ("iri", "pname"):
                            raise ParseError("expected datatype IRI after ^^", lexer.line)
                        dt = resolve(dt_tok[0], dt_tok[1], lexer.line)
                        after = lexer.next_token()
                    else:
                        dt = DT_TEXT
                    try:
                        obj: Term = Literal(lex, dt)
                    except ValueError as exc:
                        raise ParseError(str(exc), lexer.line) from exc
                else:
                    obj = resolve(obj_tok[0], obj_tok[1], lexer.line)
                    after = lexer.next_token()
                pending.append((subject, predicate, obj))
                if after == ("punct", ","):
                    continue
                break
            if after == ("punct", ";"):
                continue
            if after == ("punct", "."):
                break
            raise ParseError("expected '.', ';' or ',' after object", lexer.line)
        token = lexer.next_token()

    if "oc" in prefixes and "ind" in prefixes:
        namespaces = Namespaces(vocab=prefixes["oc"], instance=prefixes["ind"])
    graph = Graph(vocabulary, namespaces)
    for s, p, o in pending:
        graph.add(s, p, o)
    return graph


# --- format dispatch ----------------------------------------------------------------------

FORMATS = ("ntriples", "turtle")


def serialize(graph: Graph, fmt: str = "ntriples") -> bytes:
    if fmt == "ntriples":
        return emit_ntriples(graph)
    if fmt == "turtle":
        return emit_turtle(graph)
    raise ValueError(f"unknown format: {fmt!r}")


def parse(data: bytes, fmt: str = "ntriples", vocabulary: Vocabulary | None = None) -> Graph:
    if fmt == "ntriples":
        return parse_ntriples(data, vocabulary)
    if fmt == "turtle":
        return parse_turtle(data, vocabulary)
    raise ValueError(f"unknown format: {fmt!r}")


def sniff_format(data: bytes) -> str:
    head = data.lstrip()[:7]
    return "turtle" if head.startswith(b"@prefix") else "ntriples"
