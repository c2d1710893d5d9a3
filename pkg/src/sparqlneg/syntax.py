"""Graph pattern syntax trees."""

from __future__ import annotations

from dataclasses import dataclass
import typing
from typing import Iterator

from .formulas import Formula, formula_vars
from .rdf import IRI, VARIABLE, Term


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if self.predicate.kind not in (IRI, VARIABLE):
            raise ValueError(f"predicate must be an IRI or variable, got {self.predicate}")

    def terms(self):
        return (self.subject, self.predicate, self.object)


@dataclass(frozen=True, slots=True)
class And:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True, slots=True)
class Union:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True, slots=True)
class Opt:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True, slots=True)
class Minus:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True, slots=True)
class NotExists:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True, slots=True)
class Diff:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True, slots=True)
class Filter:
    pattern: "Pattern"
    condition: Formula


@dataclass(frozen=True, slots=True)
class GraphPattern:
    name: Term
    pattern: "Pattern"

    def __post_init__(self):
        if self.name.kind not in (IRI, VARIABLE):
            raise ValueError(f"GRAPH name must be an IRI or variable, got {self.name}")


@dataclass(frozen=True, slots=True)
class Unit:
    """The empty group pattern; evaluates to the join identity."""


Pattern = typing.Union[TriplePattern, And, Union, Opt, Minus, NotExists, Diff, Filter, GraphPattern, Unit]

BINARY = (And, Union, Opt, Minus, NotExists, Diff)

# DSL keyword for each node type; shared by the printer and parser.
KEYWORDS = {
    And: "and", Union: "union", Opt: "opt", Minus: "minus",
    NotExists: "not-exists", Diff: "diff", Filter: "filter",
    GraphPattern: "graph", Unit: "unit", TriplePattern: "triple",
}


def children(p: Pattern) -> tuple:
    if isinstance(p, BINARY):
        return (p.left, p.right)
    if isinstance(p, (Filter, GraphPattern)):
        return (p.pattern,)
    return ()


def with_children(p: Pattern, kids) -> Pattern:
    if isinstance(p, BINARY):
        return type(p)(*kids)
    if isinstance(p, Filter):
        return Filter(kids[0], p.condition)
    if isinstance(p, GraphPattern):
        return GraphPattern(p.name, kids[0])
    return p


def walk(p: Pattern, path=()) -> Iterator[tuple[tuple, Pattern]]:
    """Pre-order traversal yielding ``(path, subpattern)``."""
    yield path, p
    for i, child in enumerate(children(p)):
        yield from walk(child, path + (i,))


def var_set(p: Pattern) -> set[Term]:
    """Variables occurring anywhere in ``p``, including filters and GRAPH."""
    out: set[Term] = set()
    for _, node in walk(p):
        if isinstance(node, TriplePattern):
            out.update(t for t in node.terms() if t.is_var)
        elif isinstance(node, Filter):
            out |= formula_vars(node.condition)
        elif isinstance(node, GraphPattern) and node.name.is_var:
            out.add(node.name)
    return out


def graph_names(p: Pattern) -> set[Term]:
    return {node.name for _, node in walk(p) if isinstance(node, GraphPattern)}


def node_count(p: Pattern) -> int:
    return sum(1 for _ in walk(p))


def depth(p: Pattern) -> int:
    kids = children(p)
    return 1 + (max(depth(k) for k in kids) if kids else 0)
