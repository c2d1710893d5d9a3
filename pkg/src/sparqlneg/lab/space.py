"""Finite spaces of graphs and datasets for brute-force comparison."""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass

from ..rdf import NAF_GRAPH, Dataset, Graph, Term, iri, triple
from ..syntax import graph_names

BUDGET_ENV = "SPARQLNEG_SPACE_BUDGET"
DEFAULT_BUDGET = 100_000


class SpaceTooLarge(ValueError):
    pass


class SpaceSyntaxError(ValueError):
    pass


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def _iris(values) -> tuple[Term, ...]:
    return tuple(v if isinstance(v, Term) else iri(v) for v in values)


@dataclass(frozen=True)
class GraphSpace:
    """Graphs over a triple universe ``subjects × predicates × objects``.

    ``exhaustive`` enumerates every subset of at most ``max_triples`` triples,
    smallest first.  ``random`` draws ``samples`` subsets with ``seed``.
    ``graphs`` replaces the enumeration with an explicit list.  ``names`` are
    the graph IRIs that ``(graph ?var ...)`` ranges over.
    """

    subjects: tuple = (":a", ":b")
    predicates: tuple = (":p", ":q")
    objects: tuple | None = None
    max_triples: int | None = None
    mode: str = "exhaustive"
    samples: int = 200
    seed: int = 0
    graphs: tuple | None = None
    names: tuple = (":g",)
    budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "subjects", _iris(self.subjects))
        object.__setattr__(self, "predicates", _iris(self.predicates))
        objs = self.subjects if self.objects is None else _iris(self.objects)
        object.__setattr__(self, "objects", objs)
        object.__setattr__(self, "names", _iris(self.names))
        if self.graphs is not None:
            object.__setattr__(self, "graphs", tuple(self.graphs))
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"mode must be exhaustive or random, got {self.mode!r}")

    @classmethod
    def explicit(cls, graphs, **kwargs) -> "GraphSpace":
        return cls(graphs=tuple(graphs), **kwargs)

    @classmethod
    def parse(cls, text: str) -> "GraphSpace":
        """Parse ``s=a,b;p=p,q;o=a,b;max=8;mode=random;samples=50;seed=1;names=g``."""
        keys = {"s": "subjects", "p": "predicates", "o": "objects", "max": "max_triples",
                "mode": "mode", "samples": "samples", "seed": "seed", "names": "names",
                "budget": "budget"}
        kwargs = {}
        for part in filter(None, (x.strip() for x in text.split(";"))):
            key, sep, value = part.partition("=")
            key = key.strip()
            if not sep or key not in keys:
                raise SpaceSyntaxError(f"bad space component {part!r}; keys are {', '.join(keys)}")
            field_name = keys[key]
            if field_name in ("max_triples", "samples", "seed", "budget"):
                try:
                    kwargs[field_name] = int(value)
                except ValueError:
                    raise SpaceSyntaxError(f"{key} needs an integer, got {value!r}") from None
            elif field_name == "mode":
                kwargs[field_name] = value.strip()
            else:
                vals = [v.strip() for v in value.split(",") if v.strip()]
                if not vals:
                    raise SpaceSyntaxError(f"{key} needs at least one value")
                kwargs[field_name] = tuple(vals)
        try:
            return cls(**kwargs)
        except ValueError as exc:
            raise SpaceSyntaxError(str(exc)) from None

    def universe(self) -> list:
        return [triple(s, p, o) for s in self.subjects for p in self.predicates
                for o in self.objects]

    def _limit(self) -> int:
        n = len(self.universe())
        return n if self.max_triples is None else min(self.max_triples, n)

    def graph_count(self) -> int:
        if self.graphs is not None:
            return len(self.graphs)
        if self.mode == "random":
            return self.samples
        n = len(self.universe())
        return sum(math.comb(n, k) for k in range(self._limit() + 1))

    def iter_graphs(self):
        if self.graphs is not None:
            yield from self.graphs
            return
        universe = self.universe()
        limit = self._limit()
        if self.mode == "random":
            rng = random.Random(self.seed)
            for _ in range(self.samples):
                k = rng.randint(0, limit)
                yield Graph(rng.sample(universe, k))
            return
        budget = self.budget or default_budget()
        if self.graph_count() > budget:
            raise SpaceTooLarge(f"{self.graph_count()} graphs exceed the budget of {budget} "
                                f"(set {BUDGET_ENV} to raise it)")
        for k in range(limit + 1):
            for combo in itertools.combinations(universe, k):
                yield Graph(combo)

    def graph_names_for(self, *patterns) -> list[Term]:
        """Named graphs a dataset needs so that every GRAPH in ``patterns`` can vary."""
        names: set[Term] = set()
        uses_var = False
        for p in patterns:
            for n in graph_names(p):
                if n.is_var:
                    uses_var = True
                elif n != NAF_GRAPH:
                    names.add(n)
        if uses_var:
            names.update(self.names)
        return sorted(names)

    def iter_datasets(self, *patterns):
        """Datasets in canonical order: default graph only, unless the
        patterns use GRAPH, in which case every named graph also ranges over
        the space."""
        names = self.graph_names_for(*patterns)
        if not names:
            for g in self.iter_graphs():
                yield Dataset(g)
            return
        total = self.graph_count() ** (len(names) + 1)
        budget = self.budget or default_budget()
        if total > budget:
            raise SpaceTooLarge(f"{total} datasets exceed the budget of {budget} "
                                f"(set {BUDGET_ENV} to raise it)")
        graphs = list(self.iter_graphs())
        for combo in itertools.product(graphs, repeat=len(names) + 1):
            yield Dataset(combo[0], dict(zip(names, combo[1:])))
