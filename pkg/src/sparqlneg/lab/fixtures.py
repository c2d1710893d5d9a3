"""Fixture multisets and concrete patterns that realize them."""

from __future__ import annotations

from ..patterns import evaluate
from ..rdf import Dataset, Graph, iri, triple, var
from ..solutions import EMPTY, OMEGA0, Mapping, MappingMultiset
from ..syntax import GraphPattern, TriplePattern, Union, Unit

NAMES = ("∅", "Ω0", "Ω1", "Ω2", "Ω3")
ASCII_NAMES = {"empty": "∅", "O0": "Ω0", "O1": "Ω1", "O2": "Ω2", "O3": "Ω3"}

X, Y, Z = var("X"), var("Y"), var("Z")
A, B, C = iri(":a"), iri(":b"), iri(":c")


def fixture_multisets() -> dict[str, MappingMultiset]:
    """Ω1 over {?X} with a duplicate, Ω2 over {?X,?Y}, Ω3 over {?Z}."""
    return {
        "∅": EMPTY,
        "Ω0": OMEGA0,
        "Ω1": MappingMultiset([(Mapping({X: A}), 1), (Mapping({X: B}), 2)]),
        "Ω2": MappingMultiset([(Mapping({X: A, Y: C}), 1), (Mapping({X: C, Y: C}), 1)]),
        "Ω3": MappingMultiset([(Mapping({Z: C}), 1)]),
    }


FIXTURE_GRAPH = Graph([
    triple(":a", ":p1", ":o"), triple(":b", ":p1", ":o"), triple(":b", ":p2", ":o"),
    triple(":a", ":q", ":c"), triple(":c", ":q", ":c"),
    triple(":c", ":r", ":o"),
])

FIXTURE_GRAPH_NAME = iri(":h")


def _tp(s, p, o):
    return TriplePattern(s, iri(p), iri(o) if isinstance(o, str) else o)


REALIZATIONS = {
    "∅": _tp(X, ":absent", ":o"),
    "Ω0": Unit(),
    "Ω1": Union(_tp(X, ":p1", ":o"), _tp(X, ":p2", ":o")),
    "Ω2": _tp(X, ":q", Y),
    "Ω3": _tp(Z, ":r", ":o"),
}


class UnrealizableFixture(AssertionError):
    """A realization pattern did not evaluate to its fixture (harness bug)."""


def realize(name: str, in_named_graph: bool = False):
    """Pattern whose evaluation over the fixture dataset is the named fixture.

    With ``in_named_graph`` the pattern reads the fixture triples from the
    named graph ``:h`` so the default graph is free to vary.
    """
    p = REALIZATIONS[name]
    return GraphPattern(FIXTURE_GRAPH_NAME, p) if in_named_graph else p


def fixture_dataset(default: Graph = FIXTURE_GRAPH) -> Dataset:
    return Dataset(default, {FIXTURE_GRAPH_NAME: FIXTURE_GRAPH})


def validate_realizations() -> None:
    omegas = fixture_multisets()
    for empty_default in (False, True):
        ds = fixture_dataset(Graph() if empty_default else FIXTURE_GRAPH)
        for name in NAMES:
            for named in (False, True):
                if empty_default and not named:
                    continue
                got = evaluate(realize(name, named), ds)
                if got != omegas[name]:
                    raise UnrealizableFixture(f"{name}: realized {got}, expected {omegas[name]}")
