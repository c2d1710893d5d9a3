"""Patterns exercised by the rewrite acceptance run.  Predicates and
constants stay inside the default graph space (:a :b, :p :q)."""

OPT_PLAIN = [
    "(opt (triple ?X :p ?Y) (triple ?Y :q ?Z))",
    "(opt (triple ?X :p :a) (triple ?X :q ?Y))",
    "(opt (triple ?X :p ?Y) (union (triple ?Y :q ?Z) (triple ?Y :p ?Z)))",
    "(opt (opt (triple ?X :p ?Y) (triple ?Y :q ?Z)) (triple ?Z :p ?W))",
]

OPT_FILTERED = [
    "(opt (triple ?X :p ?Y) (filter (triple ?Y :q ?Z) (= ?Z :a)))",
    "(opt (triple ?X :p ?Y) (filter (triple ?X :q ?Z) (not (= ?Y ?Z))))",
    "(opt (union (triple ?X :p ?Y) (triple ?X :q :a)) (filter (triple ?X :q ?Z) (= ?Y ?Z)))",
    "(opt (triple ?X :p ?Y) (filter (triple ?Y :q ?Z) (or (bound ?W) (= ?X ?Z))))",
]

MINUS_SHARED = [
    "(minus (triple ?X :p ?Y) (triple ?X :q ?Z))",
    "(minus (triple ?X :p ?Y) (triple ?Y :q ?X))",
    "(minus (union (triple ?X :p ?Y) (triple ?X :q :a)) (triple ?Y :p ?Z))",
    "(minus (triple ?X :p ?Y) (union (triple ?X :q :a) (triple ?Z :q ?Y)))",
    "(minus (opt (triple ?X :p :a) (triple ?X :q ?Y)) (triple ?Y :p :b))",
]

MINUS_DISJOINT = [
    "(minus (triple ?X :p ?Y) (triple ?Z :q ?W))",
    "(minus (triple ?X :p :a) (triple ?Z :q :b))",
]

NEX_FRAGMENT = [
    "(not-exists (triple ?X :p ?Y) (triple ?Y :q ?X))",
    "(not-exists (triple ?X :p :a) (triple ?X :q ?Z))",
    "(not-exists (triple ?X :p ?Y) (union (triple ?X :q ?Y) (triple ?Y :p ?X)))",
    "(not-exists (triple ?X :p ?Y) (diff (triple ?X :q ?Y) (triple ?Y :p :a)))",
    "(not-exists (triple ?X :p ?Y) (and (triple ?X :q ?Z) (triple ?Z :p ?Y)))",
    "(not-exists (triple ?X :p ?Y) (triple ?Z :q :a))",
    "(not-exists (opt (triple ?X :p ?Y) (triple ?Y :q ?Z)) (triple ?X :q :a))",
]

MIXED = [
    "(minus (opt (triple ?X :p ?Y) (triple ?Y :q ?Z)) (triple ?X :q :b))",
    "(not-exists (minus (triple ?X :p ?Y) (triple ?Y :q ?Z)) (triple ?X :q ?Y))",
]

COUNTEREXAMPLE = "(not-exists (triple ?X :p :b) (not-exists (triple ?Z :q :d) (triple ?W :r ?X)))"


def family() -> list[str]:
    return OPT_PLAIN + OPT_FILTERED + MINUS_SHARED + MINUS_DISJOINT + NEX_FRAGMENT + MIXED
