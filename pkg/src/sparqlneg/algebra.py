"""Multiset algebra over solution mappings.

The W3C operators (projection, selection, join, difference, union, minus,
left-join) plus simple difference.  Projection, selection, join, union and
simple difference form the core subset.
"""

from __future__ import annotations

import typing
from dataclasses import dataclass

from .formulas import TRUE, Formula, TruthValue, compile_formula
from .solutions import Mapping, MappingMultiset, compatible, merge, restrict
from . import solutions

_T = TruthValue.TRUE
_F = TruthValue.FALSE


def project(o: MappingMultiset, w) -> MappingMultiset:
    w = frozenset(w)
    out: dict[Mapping, int] = {}
    for m, n in o.items():
        r = restrict(m, w)
        out[r] = out.get(r, 0) + n
    return MappingMultiset._trusted(out)


def select(o: MappingMultiset, f: Formula) -> MappingMultiset:
    if not o:
        return o
    test = compile_formula(f)
    return MappingMultiset._trusted({m: n for m, n in o.items() if test(m) is _T})


def join(o1: MappingMultiset, o2: MappingMultiset) -> MappingMultiset:
    # Pairwise accumulation realizes the sum over decompositions.
    out: dict[Mapping, int] = {}
    right = list(o2.items())
    for m1, n1 in o1.items():
        for m2, n2 in right:
            if compatible(m1, m2):
                m = merge(m1, m2)
                out[m] = out.get(m, 0) + n1 * n2
    return MappingMultiset._trusted(out)


def union(o1: MappingMultiset, o2: MappingMultiset) -> MappingMultiset:
    out = dict(o1.items())
    for m, n in o2.items():
        out[m] = out.get(m, 0) + n
    return MappingMultiset._trusted(out)


def diff(o1: MappingMultiset, o2: MappingMultiset, f: Formula,
         error_as_false: bool = True) -> MappingMultiset:
    """``o1 \\_F o2``: keep μ1 when every compatible μ2 makes F false.

    With ``error_as_false`` an error counts as false (the errata reading);
    otherwise only a literal false lets μ1 survive.
    """
    if not o1 or not o2:
        return o1
    right = list(o2.mappings())
    test = compile_formula(f)
    out = {}
    for m1, n in o1.items():
        for m2 in right:
            if not compatible(m1, m2):
                continue
            v = test(merge(m1, m2))
            if v is _F or (error_as_false and v is TruthValue.ERROR):
                continue
            break
        else:
            out[m1] = n
    return MappingMultiset._trusted(out)


def minus(o1: MappingMultiset, o2: MappingMultiset) -> MappingMultiset:
    right = list(o2.mappings())
    out = {}
    for m1, n in o1.items():
        d1 = m1.domain()
        if all(not compatible(m1, m2) or d1.isdisjoint(m2.domain()) for m2 in right):
            out[m1] = n
    return MappingMultiset._trusted(out)


def sdiff(o1: MappingMultiset, o2: MappingMultiset) -> MappingMultiset:
    right = list(o2.mappings())
    return MappingMultiset._trusted(
        {m1: n for m1, n in o1.items() if not any(compatible(m1, m2) for m2 in right)})


def leftjoin(o1: MappingMultiset, o2: MappingMultiset, f: Formula = TRUE,
             error_as_false: bool = True) -> MappingMultiset:
    return union(select(join(o1, o2), f), diff(o1, o2, f, error_as_false))


def rename(o: MappingMultiset, renaming: dict) -> MappingMultiset:
    out: dict[Mapping, int] = {}
    for m, n in o.items():
        r = solutions.rename(m, renaming)
        out[r] = out.get(r, 0) + n
    return MappingMultiset._trusted(out)


# -- expression trees ------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Input:
    name: str


@dataclass(frozen=True, slots=True)
class Project:
    variables: frozenset
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class Select:
    formula: Formula
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class Join:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Union:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class SDiff:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Diff:
    formula: Formula
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class LeftJoin:
    formula: Formula
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Minus:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Rename:
    """Variable renaming; used to build the renamed copy in the minus rewrite."""
    renaming: tuple  # sorted ((old, new), ...)
    arg: "Expr"


Expr = typing.Union[Input, Project, Select, Join, Union, SDiff, Diff, LeftJoin, Minus, Rename]

CORE = (Input, Project, Select, Join, Union, SDiff, Rename)


class UnboundInput(KeyError):
    pass


def eval_algebra(e: Expr, env: dict, error_as_false: bool = True) -> MappingMultiset:
    # Rewrites share subtrees by reference (one operand feeds several
    # slices), so results are memoized per node object.
    memo: dict[int, MappingMultiset] = {}

    def ev(x):
        key = id(x)
        hit = memo.get(key)
        if hit is None:
            try:
                rule = steps[type(x)]
            except KeyError:
                raise TypeError(f"not an algebra expression: {x!r}") from None
            hit = memo[key] = rule(x)
        return hit

    def leaf(x):
        try:
            return env[x.name]
        except KeyError:
            raise UnboundInput(x.name) from None

    def lazy(op):
        # Join and the differences are empty on an empty left operand; the
        # right side is often a large slice, so it is skipped.
        def rule(x):
            lhs = ev(x.left)
            return lhs if not lhs else op(x, lhs, ev(x.right))
        return rule

    steps = {
        Input: leaf,
        Project: lambda x: project(ev(x.arg), x.variables),
        Select: lambda x: select(ev(x.arg), x.formula),
        Rename: lambda x: rename(ev(x.arg), dict(x.renaming)),
        Union: lambda x: union(ev(x.left), ev(x.right)),
        Join: lazy(lambda x, l, r: join(l, r)),
        SDiff: lazy(lambda x, l, r: sdiff(l, r)),
        Minus: lazy(lambda x, l, r: minus(l, r)),
        Diff: lazy(lambda x, l, r: diff(l, r, x.formula, error_as_false)),
        LeftJoin: lazy(lambda x, l, r: leftjoin(l, r, x.formula, error_as_false)),
    }
    return ev(e)


def subexpressions(e: Expr):
    yield e
    for child in expr_children(e):
        yield from subexpressions(child)


def expr_children(e: Expr) -> tuple:
    match e:
        case Input():
            return ()
        case Project(_, arg) | Select(_, arg) | Rename(_, arg):
            return (arg,)
        case Diff(_, left, right) | LeftJoin(_, left, right):
            return (left, right)
        case Join(left, right) | Union(left, right) | SDiff(left, right) | Minus(left, right):
            return (left, right)
    raise TypeError(f"not an algebra expression: {e!r}")


def is_core(e: Expr) -> bool:
    stack = [e]
    while stack:
        x = stack.pop()
        if not isinstance(x, CORE):
            return False
        stack.extend(expr_children(x))
    return True


def static_domain(e: Expr, leaf_domains: dict) -> frozenset:
    """Upper bound on ``dom(Ω)`` for every value ``e`` can take."""
    match e:
        case Input(name):
            return frozenset(leaf_domains[name])
        case Project(variables, arg):
            return static_domain(arg, leaf_domains) & frozenset(variables)
        case Select(_, arg):
            return static_domain(arg, leaf_domains)
        case Rename(renaming, arg):
            r = dict(renaming)
            return frozenset(r.get(v, v) for v in static_domain(arg, leaf_domains))
        case Join(left, right) | Union(left, right) | LeftJoin(_, left, right):
            return static_domain(left, leaf_domains) | static_domain(right, leaf_domains)
        case SDiff(left, _) | Diff(_, left, _) | Minus(left, _):
            return static_domain(left, leaf_domains)
    raise TypeError(f"not an algebra expression: {e!r}")
