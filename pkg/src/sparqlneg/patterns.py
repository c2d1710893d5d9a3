"""Evaluation of graph patterns over a graph or dataset, plus the static
analyses (safe variables, NOT-EXISTS fragment membership)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import algebra
from .formulas import TRUE
from .rdf import NAF_GRAPH, Dataset, Graph, Term, with_naf_graph
from .solutions import EMPTY, OMEGA0, Mapping, MappingMultiset, restrict, substitute
from .syntax import (And, Diff, Filter, GraphPattern, Minus, NotExists, Opt,
                     Pattern, TriplePattern, Union, Unit, graph_names, var_set, walk)

DEFAULT_MAX_DEPTH = 64


class EvaluationDepthExceeded(RecursionError):
    pass


@dataclass(frozen=True)
class EvalContext:
    dataset: Dataset
    active_graph: Graph = None
    error_as_false: bool = True
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self):
        if self.active_graph is None:
            object.__setattr__(self, "active_graph", self.dataset.default)

    def switch(self, g: Graph) -> "EvalContext":
        return EvalContext(self.dataset, g, self.error_as_false, self.max_depth)


def make_context(source, pattern: Pattern | None = None, *, error_as_false=True,
                 max_depth=DEFAULT_MAX_DEPTH) -> EvalContext:
    """Build a context from a Graph or Dataset.

    When ``pattern`` queries the reserved auxiliary graph it is added to the
    dataset.
    """
    if isinstance(source, EvalContext):
        return source
    ds = source if isinstance(source, Dataset) else Dataset(source)
    if pattern is not None and NAF_GRAPH in graph_names(pattern):
        ds = with_naf_graph(ds)
    return EvalContext(ds, ds.default, error_as_false, max_depth)


def evaluate(p: Pattern, source, **kwargs) -> MappingMultiset:
    """Convenience wrapper: ``⟦p⟧`` over a Graph, Dataset or EvalContext."""
    return eval_pattern(p, make_context(source, p, **kwargs))


def match_triple(t: TriplePattern, g: Graph) -> MappingMultiset:
    out = {}
    terms = t.terms()
    for tr in g.triples:
        binding: dict[Term, Term] = {}
        for pat, val in zip(terms, (tr.subject, tr.predicate, tr.object)):
            if pat.is_var:
                prev = binding.get(pat)
                if prev is None:
                    binding[pat] = val
                elif prev != val:
                    break
            elif pat != val:
                break
        else:
            out[Mapping._trusted(binding)] = 1
    return MappingMultiset._trusted(out)


def eval_pattern(p: Pattern, ctx: EvalContext) -> MappingMultiset:
    return _Evaluator(ctx).eval(p, ctx.active_graph, 0)


class _Evaluator:
    def __init__(self, ctx: EvalContext):
        self.ctx = ctx
        self.flag = ctx.error_as_false

    def eval(self, p, g: Graph, level: int) -> MappingMultiset:
        if level > self.ctx.max_depth:
            raise EvaluationDepthExceeded(f"pattern nesting exceeds {self.ctx.max_depth}")
        level += 1
        match p:
            case TriplePattern():
                return match_triple(p, g)
            case Unit():
                return OMEGA0
            case And(left, right):
                return algebra.join(self.eval(left, g, level), self.eval(right, g, level))
            case Union(left, right):
                return algebra.union(self.eval(left, g, level), self.eval(right, g, level))
            case Opt(left, Filter(inner, cond)):
                return algebra.leftjoin(self.eval(left, g, level), self.eval(inner, g, level),
                                        cond, self.flag)
            case Opt(left, right):
                return algebra.leftjoin(self.eval(left, g, level), self.eval(right, g, level),
                                        TRUE, self.flag)
            case Minus(left, right):
                return algebra.minus(self.eval(left, g, level), self.eval(right, g, level))
            case Diff(left, right):
                return algebra.sdiff(self.eval(left, g, level), self.eval(right, g, level))
            case Filter(inner, cond):
                return algebra.select(self.eval(inner, g, level), cond)
            case NotExists(left, right):
                return self.not_exists(left, right, g, level)
            case GraphPattern(name, inner):
                return self.graph(name, inner, level)
        raise TypeError(f"not a graph pattern: {p!r}")

    def not_exists(self, left, right, g, level):
        lhs = self.eval(left, g, level)
        rvars = var_set(right)
        cache: dict[Mapping, bool] = {}
        out = {}
        for m, n in lhs.items():
            key = restrict(m, rvars)
            empty = cache.get(key)
            if empty is None:
                empty = not self.eval(substitute(key, right), g, level)
                cache[key] = empty
            if empty:
                out[m] = n
        return MappingMultiset._trusted(out)

    def graph(self, name: Term, inner, level):
        named = self.ctx.dataset.named
        if not name.is_var:
            g = named.get(name)
            if g is None:
                return EMPTY
            return self.eval(inner, g, level)
        acc = EMPTY
        for u, g in named.items():
            res = self.eval(inner, g, level)
            acc = algebra.union(acc, algebra.join(res, MappingMultiset({Mapping({name: u}): 1})))
        return acc


def eval_set_semantics(p: Pattern, ctx: EvalContext) -> MappingMultiset:
    return eval_pattern(p, ctx).distinct()


def safe_vars(p: Pattern) -> set[Term]:
    match p:
        case TriplePattern():
            return var_set(p)
        case Unit():
            return set()
        case And(left, right):
            return safe_vars(left) | safe_vars(right)
        case Union(left, right) | Opt(left, right):
            return safe_vars(left) & safe_vars(right)
        case Minus(left, _) | NotExists(left, _) | Diff(left, _):
            return safe_vars(left)
        case Filter(inner, _):
            return safe_vars(inner)
        case GraphPattern(name, inner):
            # Not covered by the recursive definition: a GRAPH variable is
            # always bound by the union over graph names.
            return safe_vars(inner) | ({name} if name.is_var else set())
    raise TypeError(f"not a graph pattern: {p!r}")


class Violation(NamedTuple):
    variable: Term
    path: tuple
    subpattern: Pattern


class FragmentVerdict(NamedTuple):
    member: bool
    violations: list


def in_fragment_ex(p: Pattern) -> FragmentVerdict:
    """Every NOT-EXISTS must have its correlated variables safe in its right arm."""
    violations = []
    for path, node in walk(p):
        if isinstance(node, NotExists):
            correlated = var_set(node.left) & var_set(node.right)
            unsafe = correlated - safe_vars(node.right)
            violations += [Violation(v, path, node) for v in sorted(unsafe)]
    return FragmentVerdict(not violations, violations)
