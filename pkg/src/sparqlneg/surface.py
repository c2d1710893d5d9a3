"""Text formats: graph files, dataset files and the s-expression pattern DSL.

Graph file, one triple per line::

    :a :p :b .
    :e :r "a literal" .

Dataset file::

    DEFAULT { :a :p :b . }
    GRAPH :g { :s :p :o . }

Pattern DSL::

    (not-exists (triple ?X :p :b) (triple ?X :q ?Z))
    (filter (opt (triple ?X :p ?Y) (triple ?Y :q ?Z)) (not (bound ?Z)))
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import formulas as fm
from .rdf import NAF_GRAPH, Dataset, Graph, Term, Triple, iri, literal, var
from .syntax import (BINARY, KEYWORDS, Filter, GraphPattern, Pattern, TriplePattern,
                     Unit)

RESERVED_MARK = "'"


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    snippet: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}\n  {self.snippet}"


class ParseError(ValueError):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


@dataclass(frozen=True)
class Token:
    kind: str   # '(' ')' '{' '}' '.' var iri literal blank symbol
    text: str
    offset: int


_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<punct>[(){}])
  | (?P<literal>"(?:[^"\\\n]|\\.)*")
  | (?P<iri><[^<>"\s{}]*>|:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-]|:)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*(?:'[0-9]*)?)
  | (?P<blank>_:[A-Za-z0-9_]+|\[\])
  | (?P<dot>\.)
  | (?P<symbol>[A-Za-z=][A-Za-z0-9\-]*)
""", re.VERBOSE)


def _position(text: str, offset: int) -> tuple[int, int, str]:
    line = text.count("\n", 0, offset) + 1
    start = text.rfind("\n", 0, offset) + 1
    end = text.find("\n", offset)
    if end == -1:
        end = len(text)
    return line, offset - start + 1, text[start:end]


def _fail(text: str, offset: int, message: str):
    line, col, snippet = _position(text, offset)
    raise ParseError(ParseDiagnostic(line, col, message, snippet))


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if not mo:
            _fail(text, pos, f"unexpected character {text[pos]!r}")
        kind = mo.lastgroup
        if kind != "ws":
            tok = mo.group()
            if kind == "punct":
                kind = tok
            elif kind == "dot":
                kind = "."
            tokens.append(Token(kind, tok, pos))
        pos = mo.end()
    return tokens


class _Reader:
    def __init__(self, text: str, allow_reserved: bool):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def offset(self) -> int:
        tok = self.peek()
        return tok.offset if tok else len(self.text)

    def fail(self, message, offset=None):
        _fail(self.text, self.offset() if offset is None else offset, message)

    def next(self, kind=None, what=None) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail(f"unexpected end of input, expected {what or kind or 'token'}")
        if kind is not None and tok.kind != kind:
            self.fail(f"expected {what or kind!r}, got {tok.text!r}")
        self.i += 1
        return tok

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def term(self, allowed=("var", "iri", "literal"), role="term") -> Term:
        tok = self.next(what=role)
        if tok.kind == "blank":
            self.fail("blank nodes are not supported", tok.offset)
        if tok.kind not in allowed:
            self.fail(f"{role} cannot be {tok.text!r}", tok.offset)
        if tok.kind == "var":
            if RESERVED_MARK in tok.text and not self.allow_reserved:
                self.fail(f"variable {tok.text} uses the reserved fresh-variable marker "
                          f"{RESERVED_MARK!r}", tok.offset)
            return var(tok.text[1:])
        if tok.kind == "literal":
            body = tok.text[1:-1]
            return literal(re.sub(r"\\(.)", r"\1", body))
        return iri(tok.text)


# -- graphs and datasets ---------------------------------------------------

def _read_triples(r: _Reader, stop=None) -> list[Triple]:
    triples = []
    while not r.at_end() and r.peek().kind != stop:
        s = r.term(("iri",), "subject")
        p = r.term(("iri",), "predicate")
        o = r.term(("iri", "literal"), "object")
        r.next(".", "'.'")
        triples.append(Triple(s, p, o))
    return triples


def parse_graph(text: str) -> Graph:
    r = _Reader(text, allow_reserved=False)
    return Graph(_read_triples(r))


def parse_dataset(text: str) -> Dataset:
    r = _Reader(text, allow_reserved=False)
    default = Graph()
    named = {}
    seen_default = False
    while not r.at_end():
        tok = r.next("symbol", "DEFAULT or GRAPH")
        if tok.text == "DEFAULT":
            if seen_default:
                r.fail("more than one DEFAULT block", tok.offset)
            if named:
                r.fail("DEFAULT block must precede GRAPH blocks", tok.offset)
            seen_default = True
            r.next("{", "'{'")
            default = Graph(_read_triples(r, "}"))
            r.next("}", "'}'")
        elif tok.text == "GRAPH":
            name_tok = r.peek()
            name = r.term(("iri",), "graph name")
            if name in named:
                r.fail(f"duplicate graph name {name}", name_tok.offset)
            if name == NAF_GRAPH:
                r.fail(f"graph name {name} is reserved", name_tok.offset)
            r.next("{", "'{'")
            named[name] = Graph(_read_triples(r, "}"))
            r.next("}", "'}'")
        else:
            r.fail(f"expected DEFAULT or GRAPH, got {tok.text!r}", tok.offset)
    return Dataset(default, named)


def print_graph(g: Graph) -> str:
    return "".join(f"{t}\n" for t in g)


def print_dataset(d: Dataset) -> str:
    return str(d) + "\n"


# -- patterns --------------------------------------------------------------

_PATTERN_TYPES = {v: k for k, v in KEYWORDS.items()}


def parse_pattern(text: str, allow_reserved: bool = False) -> Pattern:
    """Parse the s-expression pattern DSL.

    Variables carrying the fresh-variable marker are rejected unless
    ``allow_reserved`` is set (e.g. when re-reading rewriter output).
    """
    r = _Reader(text, allow_reserved)
    p = _pattern(r)
    if not r.at_end():
        r.fail(f"trailing input after pattern: {r.peek().text!r}")
    return p


def _pattern(r: _Reader) -> Pattern:
    open_tok = r.next("(", "'('")
    head = r.next("symbol", "pattern keyword")
    cls = _PATTERN_TYPES.get(head.text)
    if cls is None:
        r.fail(f"unknown pattern keyword {head.text!r}", head.offset)
    if cls is TriplePattern:
        s = r.term(role="subject")
        p = r.term(("var", "iri"), "predicate")
        o = r.term(role="object")
        if not any(t.is_var for t in (s, p, o)):
            r.fail("triple pattern needs at least one variable", open_tok.offset)
        node = TriplePattern(s, p, o)
    elif cls is Unit:
        node = Unit()
    elif cls is Filter:
        inner = _pattern(r)
        node = Filter(inner, _formula(r))
    elif cls is GraphPattern:
        name = r.term(("var", "iri"), "graph name")
        node = GraphPattern(name, _pattern(r))
    else:
        args = [_pattern(r), _pattern(r)]
        # and/union accept more than two arguments, folded to the left
        while cls in _NARY and r.peek() is not None and r.peek().kind == "(":
            args.append(_pattern(r))
        node = cls(args[0], args[1])
        for extra in args[2:]:
            node = cls(node, extra)
    r.next(")", "')'")
    return node


_NARY = {cls for cls, kw in KEYWORDS.items() if kw in ("and", "union")}


def parse_formula(text: str, allow_reserved: bool = False) -> fm.Formula:
    r = _Reader(text, allow_reserved)
    f = _formula(r)
    if not r.at_end():
        r.fail(f"trailing input after formula: {r.peek().text!r}")
    return f


def _formula(r: _Reader) -> fm.Formula:
    tok = r.peek()
    if tok is not None and tok.kind == "symbol" and tok.text in ("true", "false"):
        r.next()
        return fm.Const(tok.text == "true")
    r.next("(", "'(' or true/false")
    head = r.next("symbol", "formula operator")
    if head.text == "=":
        f = fm.Eq(r.term(), r.term())
    elif head.text == "bound":
        f = fm.Bound(r.term(role="bound operand"))
    elif head.text == "not":
        f = fm.Neg(_formula(r))
    elif head.text in ("and", "or"):
        cls = fm.Conj if head.text == "and" else fm.Disj
        f = cls(_formula(r), _formula(r))
        while r.peek() is not None and r.peek().kind != ")":
            f = cls(f, _formula(r))
    else:
        r.fail(f"unknown formula operator {head.text!r}", head.offset)
    r.next(")", "')'")
    return f


def print_formula(f: fm.Formula) -> str:
    match f:
        case fm.Eq(left, right):
            return f"(= {left} {right})"
        case fm.Bound(term):
            return f"(bound {term})"
        case fm.Const(value):
            return "true" if value else "false"
        case fm.Neg(arg):
            return f"(not {print_formula(arg)})"
        case fm.Conj(left, right):
            return f"(and {print_formula(left)} {print_formula(right)})"
        case fm.Disj(left, right):
            return f"(or {print_formula(left)} {print_formula(right)})"
    raise TypeError(f"not a formula: {f!r}")


def print_pattern(p: Pattern, pretty: bool = False, width: int = 78) -> str:
    """Render ``p`` in the DSL; ``parse_pattern`` inverts it."""
    flat = _flat(p)
    if not pretty:
        return flat
    return _pretty(p, 0, width)


def _flat(p: Pattern) -> str:
    kw = KEYWORDS[type(p)]
    if isinstance(p, TriplePattern):
        return f"(triple {p.subject} {p.predicate} {p.object})"
    if isinstance(p, Unit):
        return "(unit)"
    if isinstance(p, Filter):
        return f"(filter {_flat(p.pattern)} {print_formula(p.condition)})"
    if isinstance(p, GraphPattern):
        return f"(graph {p.name} {_flat(p.pattern)})"
    if isinstance(p, BINARY):
        return f"({kw} {_flat(p.left)} {_flat(p.right)})"
    raise TypeError(f"not a graph pattern: {p!r}")


def _pretty(p: Pattern, indent: int, width: int) -> str:
    flat = _flat(p)
    if indent + len(flat) <= width or isinstance(p, (TriplePattern, Unit)):
        return flat
    pad = " " * (indent + 2)
    kw = KEYWORDS[type(p)]
    if isinstance(p, Filter):
        inner = _pretty(p.pattern, indent + 2, width)
        return f"(filter\n{pad}{inner}\n{pad}{print_formula(p.condition)})"
    if isinstance(p, GraphPattern):
        inner = _pretty(p.pattern, indent + 2, width)
        return f"(graph {p.name}\n{pad}{inner})"
    left = _pretty(p.left, indent + 2, width)
    right = _pretty(p.right, indent + 2, width)
    return f"({kw}\n{pad}{left}\n{pad}{right})"


def print_algebra(e) -> str:
    """S-expression form of an algebra expression (output only).  Leaves
    print as their names, which for compiled patterns is the pattern text."""
    from . import algebra as alg

    match e:
        case alg.Input(name):
            return name
        case alg.Project(variables, arg):
            return f"(project ({' '.join(map(str, sorted(variables)))}) {print_algebra(arg)})"
        case alg.Select(formula, arg):
            return f"(select {print_formula(formula)} {print_algebra(arg)})"
        case alg.Rename(renaming, arg):
            pairs = " ".join(f"({a} {b})" for a, b in renaming)
            return f"(rename ({pairs}) {print_algebra(arg)})"
        case alg.Join(l, r):
            return f"(join {print_algebra(l)} {print_algebra(r)})"
        case alg.Union(l, r):
            return f"(union {print_algebra(l)} {print_algebra(r)})"
        case alg.SDiff(l, r):
            return f"(sdiff {print_algebra(l)} {print_algebra(r)})"
        case alg.Minus(l, r):
            return f"(minus {print_algebra(l)} {print_algebra(r)})"
        case alg.Diff(f, l, r):
            return f"(diff {print_formula(f)} {print_algebra(l)} {print_algebra(r)})"
        case alg.LeftJoin(f, l, r):
            return f"(leftjoin {print_formula(f)} {print_algebra(l)} {print_algebra(r)})"
    raise TypeError(f"not an algebra expression: {e!r}")
