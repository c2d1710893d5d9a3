"""Ground RDF vocabulary: terms, triples, graphs and datasets.

Blank nodes are not modelled.  Literals are opaque strings without datatype
or language tag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

IRI = "iri"
LITERAL = "literal"
VARIABLE = "variable"

_KINDS = (IRI, LITERAL, VARIABLE)


@dataclass(frozen=True, order=True, slots=True)
class Term:
    """An IRI, a literal or a variable.

    ``lexical`` holds the IRI as written (``:a`` or ``<http://x/a>``), the
    literal's unquoted content, or the variable name without its ``?``.
    """

    kind: str
    lexical: str

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown term kind {self.kind!r}")

    @property
    def is_var(self) -> bool:
        return self.kind == VARIABLE

    @property
    def is_ground(self) -> bool:
        return self.kind != VARIABLE

    def __str__(self):
        if self.kind == VARIABLE:
            return "?" + self.lexical
        if self.kind == LITERAL:
            escaped = self.lexical.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return self.lexical

    def __repr__(self):
        return f"Term({self})"


def iri(text: str) -> Term:
    if not (text.startswith(":") or (text.startswith("<") and text.endswith(">"))):
        text = ":" + text
    return Term(IRI, text)


def literal(text: str) -> Term:
    return Term(LITERAL, text)


def var(name: str) -> Term:
    return Term(VARIABLE, name.lstrip("?"))


@dataclass(frozen=True, order=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if self.subject.kind != IRI:
            raise ValueError(f"triple subject must be an IRI, got {self.subject}")
        if self.predicate.kind != IRI:
            raise ValueError(f"triple predicate must be an IRI, got {self.predicate}")
        if self.object.kind == VARIABLE:
            raise ValueError(f"triple object must be ground, got {self.object}")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def __str__(self):
        return f"{self.subject} {self.predicate} {self.object} ."


def triple(s, p, o) -> Triple:
    """Shorthand: plain strings become IRIs, ``'"x"'`` becomes a literal."""
    return Triple(*(_coerce(t) for t in (s, p, o)))


def _coerce(t) -> Term:
    if isinstance(t, Term):
        return t
    if t.startswith('"') and t.endswith('"') and len(t) >= 2:
        return literal(t[1:-1])
    return iri(t)


@dataclass(frozen=True, slots=True)
class Graph:
    """A finite set of ground triples."""

    triples: frozenset = frozenset()

    def __init__(self, triples: Iterable[Triple] = ()):
        object.__setattr__(self, "triples", frozenset(triples))

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self.triples))

    def __len__(self):
        return len(self.triples)

    def __contains__(self, t):
        return t in self.triples

    def __bool__(self):
        return bool(self.triples)

    def __str__(self):
        return "\n".join(str(t) for t in self)


EMPTY_GRAPH = Graph()


def graph_union(g1: Graph, g2: Graph) -> Graph:
    return Graph(g1.triples | g2.triples)


class UnknownGraphName(KeyError):
    pass


@dataclass(frozen=True)
class Dataset:
    """A default graph plus named graphs keyed by distinct IRIs."""

    default: Graph = EMPTY_GRAPH
    named: Mapping[Term, Graph] = field(default_factory=dict)

    def __post_init__(self):
        for name in self.named:
            if name.kind != IRI:
                raise ValueError(f"named graph name must be an IRI, got {name}")
        object.__setattr__(self, "named", dict(sorted(self.named.items())))

    def names(self) -> list[Term]:
        return list(self.named)

    def with_graph(self, name: Term, g: Graph) -> "Dataset":
        named = dict(self.named)
        named[name] = g
        return Dataset(self.default, named)

    def with_default(self, g: Graph) -> "Dataset":
        return Dataset(g, self.named)

    def __str__(self):
        parts = ["DEFAULT {"]
        parts += ["  " + str(t) for t in self.default]
        parts.append("}")
        for name, g in self.named.items():
            parts.append(f"GRAPH {name} {{")
            parts += ["  " + str(t) for t in g]
            parts.append("}")
        return "\n".join(parts)


def dataset_lookup(d: Dataset, name: Term) -> Graph:
    if name.kind != IRI:
        raise ValueError(f"graph name must be an IRI, got {name}")
    try:
        return d.named[name]
    except KeyError:
        raise UnknownGraphName(str(name)) from None


# Auxiliary graph used by the OPT/!bound difference encoding.  User datasets
# may not define it; evaluation injects it on demand.
NAF_GRAPH = iri(":__naf")
NAF_TRIPLE = triple(":s", ":p", ":o")


class ReservedGraphName(ValueError):
    pass


def with_naf_graph(d: Dataset) -> Dataset:
    existing = d.named.get(NAF_GRAPH)
    if existing is not None:
        if existing.triples != {NAF_TRIPLE}:
            raise ReservedGraphName(f"dataset already defines {NAF_GRAPH}")
        return d
    return d.with_graph(NAF_GRAPH, Graph([NAF_TRIPLE]))
