"""Solution mappings and multisets of mappings."""

from __future__ import annotations

from collections import Counter
from typing import Iterable

from .formulas import substitute_formula
from .rdf import Term
from . import syntax as s


class IncompatibleMappings(ValueError):
    pass


class Mapping:
    """A partial function from variables to ground terms.

    Immutable and hashable; bindings are kept sorted by variable name so that
    equal mappings have equal canonical forms.
    """

    __slots__ = ("_map", "_items", "_hash")

    def __init__(self, bindings=()):
        items = dict(bindings)
        for k, v in items.items():
            if not (isinstance(k, Term) and k.is_var):
                raise TypeError(f"mapping key must be a variable, got {k!r}")
            if not (isinstance(v, Term) and v.is_ground):
                raise TypeError(f"mapping value must be ground, got {v!r}")
        self._items = tuple(sorted(items.items(), key=lambda kv: kv[0].lexical))
        self._map = dict(self._items)
        self._hash = hash(self._items)

    @classmethod
    def _trusted(cls, items: dict) -> "Mapping":
        m = object.__new__(cls)
        m._items = tuple(sorted(items.items(), key=lambda kv: kv[0].lexical))
        m._map = dict(m._items)
        m._hash = hash(m._items)
        return m

    def get(self, v: Term, default=None):
        return self._map.get(v, default)

    def __getitem__(self, v: Term) -> Term:
        return self._map[v]

    def __contains__(self, v):
        return v in self._map

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._map)

    def items(self):
        return self._items

    def domain(self) -> frozenset:
        return frozenset(self._map)

    def __eq__(self, other):
        if not isinstance(other, Mapping):
            return NotImplemented
        return self._hash == other._hash and self._items == other._items

    def __hash__(self):
        return self._hash

    def key(self) -> str:
        """Canonical serialization, used for ordering."""
        return " ".join(f"{k}={v}" for k, v in self._items)

    def __str__(self):
        if not self._items:
            return "μ0"
        return "{" + ", ".join(f"{k}→{v}" for k, v in self._items) + "}"

    __repr__ = __str__


MU0 = Mapping()


def compatible(m1: Mapping, m2: Mapping) -> bool:
    if len(m1._map) > len(m2._map):
        m1, m2 = m2, m1
    other = m2._map
    for k, v in m1._items:
        w = other.get(k)
        if w is not None and w != v:
            return False
    return True


def merge(m1: Mapping, m2: Mapping) -> Mapping:
    if not compatible(m1, m2):
        raise IncompatibleMappings(f"{m1} and {m2} disagree on a shared variable")
    if not m1._items:
        return m2
    if not m2._items:
        return m1
    merged = dict(m1._map)
    merged.update(m2._map)
    return Mapping._trusted(merged)


def restrict(m: Mapping, w) -> Mapping:
    w = set(w)
    return Mapping._trusted({k: v for k, v in m._items if k in w})


def rename(m: Mapping, renaming: dict) -> Mapping:
    return Mapping._trusted({renaming.get(k, k): v for k, v in m._items})


def substitute(m: Mapping, p: s.Pattern) -> s.Pattern:
    """Replace every variable of ``dom(m)`` inside triple patterns, filter
    constraints and GRAPH names of ``p``."""
    if not m._items:
        return p
    return _subst(m, p)


def _subst(m, p):
    if isinstance(p, s.TriplePattern):
        return s.TriplePattern(*(m.get(t, t) if t.is_var else t for t in p.terms()))
    if isinstance(p, s.Filter):
        return s.Filter(_subst(m, p.pattern), substitute_formula(p.condition, m))
    if isinstance(p, s.GraphPattern):
        name = m.get(p.name, p.name) if p.name.is_var else p.name
        return s.GraphPattern(name, _subst(m, p.pattern))
    kids = s.children(p)
    if not kids:
        return p
    return s.with_children(p, [_subst(m, k) for k in kids])


class MappingMultiset:
    """A bag of mappings with explicit positive cardinalities."""

    __slots__ = ("_counts",)

    def __init__(self, entries=()):
        if isinstance(entries, MappingMultiset):
            counts = dict(entries._counts)
        else:
            counts = {}
            pairs = entries.items() if isinstance(entries, dict) else entries
            for m, n in pairs:
                if not isinstance(m, Mapping):
                    m = Mapping(m)
                if n < 0 or int(n) != n:
                    raise ValueError(f"cardinality must be a non-negative integer, got {n}")
                if n:
                    counts[m] = counts.get(m, 0) + int(n)
        self._counts = counts

    @classmethod
    def _trusted(cls, counts: dict) -> "MappingMultiset":
        o = object.__new__(cls)
        o._counts = counts
        return o

    @classmethod
    def of(cls, *mappings: Mapping) -> "MappingMultiset":
        """Each argument counts once; repeats add up."""
        return cls._trusted(dict(Counter(mappings)))

    def card(self, m: Mapping) -> int:
        return self._counts.get(m, 0)

    def items(self):
        return self._counts.items()

    def mappings(self):
        return self._counts.keys()

    def __iter__(self):
        return iter(self._counts)

    def __contains__(self, m):
        return m in self._counts

    def __len__(self):
        """Number of distinct mappings."""
        return len(self._counts)

    def total(self) -> int:
        return sum(self._counts.values())

    def __bool__(self):
        return bool(self._counts)

    def domain(self) -> frozenset:
        out = set()
        for m in self._counts:
            out.update(m._map)
        return frozenset(out)

    def distinct(self) -> "MappingMultiset":
        return MappingMultiset._trusted(dict.fromkeys(self._counts, 1))

    def is_submultiset_of(self, other: "MappingMultiset") -> bool:
        return all(n <= other.card(m) for m, n in self._counts.items())

    def sorted_items(self) -> list[tuple[Mapping, int]]:
        return sorted(self._counts.items(), key=lambda kv: kv[0].key())

    def to_records(self) -> list[dict]:
        return [{"bindings": {str(k): str(v) for k, v in m.items()}, "card": n}
                for m, n in self.sorted_items()]

    def __eq__(self, other):
        if not isinstance(other, MappingMultiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self):
        return hash(frozenset(self._counts.items()))

    def __str__(self):
        if not self._counts:
            return "∅"
        return "{" + ", ".join(f"{m}:{n}" for m, n in self.sorted_items()) + "}"

    __repr__ = __str__


EMPTY = MappingMultiset()
OMEGA0 = MappingMultiset({MU0: 1})


def multiset(*entries) -> MappingMultiset:
    """Build a multiset from ``(bindings, card)`` pairs.

    ``bindings`` may be a Mapping or a dict such as ``{var('X'): iri(':a')}``.
    """
    return MappingMultiset(entries)


def from_records(records: Iterable[dict]) -> MappingMultiset:
    """Inverse of :meth:`MappingMultiset.to_records`."""
    from .rdf import iri, literal, var

    def term(text):
        if text.startswith('"'):
            return literal(text[1:-1].replace('\\"', '"').replace("\\\\", "\\"))
        return iri(text)

    return MappingMultiset(
        (Mapping({var(k): term(v) for k, v in r["bindings"].items()}), r["card"])
        for r in records)
