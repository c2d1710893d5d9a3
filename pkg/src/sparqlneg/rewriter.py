"""Semantics-preserving rewrites.

Pattern level: OPT, MINUS and (fragment) NOT-EXISTS into DIFF, the
negation-as-failure encodings of DIFF.  Algebra level: difference, left-join
and minus into the core operators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import algebra as alg
from .formulas import (TRUE, Bound, Conj, Disj, Eq, Formula, Neg, conjoin, disjoin,
                       error_detector, formula_vars, rename_formula)
from .patterns import Violation, in_fragment_ex, safe_vars
from .rdf import NAF_GRAPH, Term, iri, var
from .syntax import (And, Diff, Filter, GraphPattern, Minus, NotExists, Opt, Pattern,
                     TriplePattern, Union, Unit, children, var_set, walk, with_children)

APPLIED = "applied"
INAPPLICABLE = "inapplicable"
REJECTED = "rejected"

MARK = "'"


class FreshVars:
    """Generates variables outside a taken set.

    Fresh names carry the reserved ``'`` marker, which the pattern parser
    rejects in user input.
    """

    def __init__(self, taken=()):
        self.taken = {t.lexical if isinstance(t, Term) else t for t in taken}
        self.generated: list[Term] = []

    def new(self, base: str) -> Term:
        base = base.lstrip("?").split(MARK)[0]
        name = base + MARK
        n = 1
        while name in self.taken:
            n += 1
            name = f"{base}{MARK}{n}"
        self.taken.add(name)
        v = var(name)
        self.generated.append(v)
        return v


@dataclass
class RewriteResult:
    output: object
    rule: str
    fresh_vars: list = field(default_factory=list)
    applicability: str = APPLIED
    reason: str = ""
    violations: list = field(default_factory=list)

    @property
    def applied(self) -> bool:
        return self.applicability == APPLIED


def _bottom_up(p: Pattern, fn, pinned: frozenset = frozenset()) -> Pattern:
    """Apply ``fn`` innermost first.  ``fn`` may take a second argument: the
    variables correlated with an enclosing NOT-EXISTS, which are substituted
    before the subpattern is evaluated."""
    kids = children(p)
    if kids:
        if isinstance(p, NotExists):
            scopes = [pinned, pinned | (var_set(p.left) & var_set(p.right))]
        else:
            scopes = [pinned] * len(kids)
        new = [_bottom_up(k, fn, sc) for k, sc in zip(kids, scopes)]
        if isinstance(p, Opt) and not isinstance(p.right, Filter) and isinstance(new[1], Filter):
            # Keep OPT's syntactic case split stable: a right arm that
            # becomes a FILTER would switch to the filtered left-join.
            new[1] = And(new[1], Unit())
        p = with_children(p, new)
    return fn(p, pinned) if getattr(fn, "wants_scope", False) else fn(p)


def _contains(p: Pattern, cls) -> bool:
    return any(isinstance(node, cls) for _, node in walk(p))


# -- slicing ---------------------------------------------------------------

def bound_slices(p: Pattern, variables, always_bound=()) -> list[tuple[tuple, Pattern]]:
    """Split ``p`` by which of ``variables`` are bound.

    Returns ``(bound_subset, pattern)`` pairs whose results partition those
    of ``p``.  Variables in ``always_bound`` are known to be bound in every
    solution, so subsets missing them are skipped.  A slice with nothing to
    test is ``p`` itself.
    """
    variables = sorted(variables)
    forced = [v for v in variables if v in set(always_bound)]
    free = [v for v in variables if v not in set(always_bound)]
    out = []
    for r in range(len(free) + 1):
        for chosen in itertools.combinations(free, r):
            guard = [Bound(v) for v in chosen] + [Neg(Bound(v)) for v in free if v not in chosen]
            sliced = Filter(p, conjoin(guard)) if guard else p
            out.append((tuple(sorted(forced + list(chosen))), sliced))
    return out


def _union_patterns(ps):
    ps = list(ps)
    acc = ps[0]
    for q in ps[1:]:
        acc = Union(acc, q)
    return acc


# -- OPT -------------------------------------------------------------------

def opt_to_diff(p: Opt, error_as_false: bool = True) -> Pattern:
    """``(P1 OPT P2)`` as a union of the matched part and a DIFF.

    The plain form is used when the filter condition cannot tell two
    compatible left solutions apart.  Otherwise the left arm is first split by
    which condition variables it binds.  In the faithful error mode the DIFF
    arm also removes solutions whose condition errs.
    """
    p1 = p.left
    if isinstance(p.right, Filter):
        p2, cond = p.right.pattern, p.right.condition
        matched = Filter(And(p1, p2), cond)
    else:
        p2, cond = p.right, TRUE
        matched = And(p1, p2)
    if error_as_false or cond == TRUE:
        removing = cond
    else:
        removing = Disj(cond, error_detector(cond))
    safe = safe_vars(p1)
    loose = (formula_vars(cond) & var_set(p1)) - safe
    if not loose and removing == cond:
        return Union(matched, Diff(p1, matched))
    parts = [Diff(s, Filter(And(s, p2), removing)) for _, s in bound_slices(p1, loose)]
    return Union(matched, _union_patterns(parts))


def rewrite_opt_to_diff(p: Pattern, error_as_false: bool = True) -> RewriteResult:
    if not _contains(p, Opt):
        return RewriteResult(p, "opt2diff", applicability=INAPPLICABLE, reason="no OPT")
    out = _bottom_up(p, lambda n: opt_to_diff(n, error_as_false) if isinstance(n, Opt) else n)
    return RewriteResult(out, "opt2diff")


# -- MINUS -----------------------------------------------------------------

def rename_pattern(p: Pattern, renaming: dict) -> Pattern:
    if isinstance(p, TriplePattern):
        return TriplePattern(*(renaming.get(t, t) for t in p.terms()))
    if isinstance(p, Filter):
        return Filter(rename_pattern(p.pattern, renaming), rename_formula(p.condition, renaming))
    if isinstance(p, GraphPattern):
        return GraphPattern(renaming.get(p.name, p.name), rename_pattern(p.pattern, renaming))
    kids = children(p)
    if not kids:
        return p
    return with_children(p, [rename_pattern(k, renaming) for k in kids])


def minus_to_diff(p: Minus, fresh: FreshVars) -> Pattern:
    """``(P1 MINUS P2)`` as a DIFF against a renamed copy of ``P2``.

    With the shared variables bound on both sides this is the plain
    equality-join form.  Otherwise ``P1`` is split by which shared variables
    it binds, and the condition asks for agreement wherever the copy binds a
    shared variable and for at least one such variable.
    """
    shared = sorted(var_set(p.left) & var_set(p.right))
    if not shared:
        return p.left
    renaming = {v: fresh.new(v.lexical) for v in shared}
    p3 = rename_pattern(p.right, renaming)
    left_safe, right_safe = safe_vars(p.left), safe_vars(p.right)
    if set(shared) <= left_safe & right_safe:
        cond = conjoin(Eq(v, renaming[v]) for v in shared)
        return Diff(p.left, Filter(And(p.left, p3), cond))
    parts = []
    for chosen, s in bound_slices(p.left, shared, left_safe):
        if not chosen:
            parts.append(s)
            continue
        if set(chosen) <= right_safe:
            cond = conjoin(Eq(v, renaming[v]) for v in chosen)
        else:
            agree = conjoin(Disj(Neg(Bound(renaming[v])), Eq(v, renaming[v])) for v in chosen)
            cond = Conj(agree, disjoin(Bound(renaming[v]) for v in chosen))
        parts.append(Diff(s, Filter(And(s, p3), cond)))
    return _union_patterns(parts)


def rewrite_minus_to_diff(p: Pattern) -> RewriteResult:
    if not _contains(p, Minus):
        return RewriteResult(p, "minus2diff", applicability=INAPPLICABLE, reason="no MINUS")
    fresh = FreshVars(var_set(p))
    kept = []

    def step(n, pinned):
        if not isinstance(n, Minus):
            return n
        if var_set(n) & pinned:
            # Equivalent replacements are not interchangeable under
            # NOT-EXISTS substitution when MINUS sees a substituted variable.
            kept.append(n)
            return n
        return minus_to_diff(n, fresh)

    step.wants_scope = True
    out = _bottom_up(p, step)
    if kept and out == p:
        return RewriteResult(p, "minus2diff", applicability=REJECTED,
                             reason="every MINUS sits inside a NOT-EXISTS right arm and uses "
                                    "a correlated variable")
    reason = f"{len(kept)} MINUS inside NOT-EXISTS right arms left in place" if kept else ""
    return RewriteResult(out, "minus2diff", fresh_vars=list(fresh.generated), reason=reason)


# -- NOT-EXISTS ------------------------------------------------------------

def substitution_hazards(arm: Pattern, correlated) -> list[Violation]:
    """Places where substituting ``correlated`` variables into ``arm`` is not
    the same as joining on them.

    Safety of the variables in ``arm`` as a whole is not enough: a FILTER may
    test a variable in a scope where it is unbound, MINUS loses the variable
    from its domain-overlap test, and OPT/DIFF/NOT-EXISTS treat their right
    operand differently when the variable is not safe on their left.
    """
    correlated = set(correlated)
    out = []
    for path, node in walk(arm):
        match node:
            case Filter(inner, cond):
                bad = (formula_vars(cond) & correlated) - safe_vars(inner)
            case Minus(_, right):
                bad = var_set(right) & correlated
            case Opt(left, Filter(inner, cond)):
                bad = (((var_set(inner) & correlated) - safe_vars(left))
                       | ((formula_vars(cond) & correlated) - safe_vars(left) - safe_vars(inner)))
            case Opt(left, right) | Diff(left, right) | NotExists(left, right):
                bad = (var_set(right) & correlated) - safe_vars(left)
            case _:
                bad = set()
        out += [Violation(v, path, node) for v in sorted(bad)]
    return out


def rewrite_nex_to_diff(p: Pattern) -> RewriteResult:
    """Replace NOT-EXISTS by DIFF when every correlated variable is safe in
    the right arm and can be substituted without changing its meaning."""
    if not _contains(p, NotExists):
        return RewriteResult(p, "nex2diff", applicability=INAPPLICABLE, reason="no NOT-EXISTS")
    verdict = in_fragment_ex(p)
    if not verdict.member:
        names = ", ".join(sorted({str(v.variable) for v in verdict.violations}))
        return RewriteResult(
            p, "nex2diff", applicability=REJECTED, violations=verdict.violations,
            reason=f"correlated variable(s) {names} not safe in the NOT-EXISTS right arm")
    hazards = []
    for path, node in walk(p):
        if isinstance(node, NotExists):
            correlated = var_set(node.left) & var_set(node.right)
            hazards += [Violation(h.variable, path + (1,) + h.path, h.subpattern)
                        for h in substitution_hazards(node.right, correlated)]
    if hazards:
        names = ", ".join(sorted({str(v.variable) for v in hazards}))
        return RewriteResult(
            p, "nex2diff", applicability=REJECTED, violations=hazards,
            reason=f"correlated variable(s) {names} change meaning under substitution "
                   f"inside the NOT-EXISTS right arm")
    out = _bottom_up(p, lambda n: Diff(n.left, n.right) if isinstance(n, NotExists) else n)
    return RewriteResult(out, "nex2diff")


# -- full normalization ----------------------------------------------------

DIFF_FRAGMENT = (And, Union, Diff, Filter, TriplePattern, Unit)


def in_diff_fragment(p: Pattern) -> bool:
    return all(isinstance(node, DIFF_FRAGMENT) for _, node in walk(p))


def normalize_to_diff(p: Pattern, error_as_false: bool = True) -> RewriteResult:
    """Rewrite NOT-EXISTS (fragment check on the input), then OPT, then MINUS."""
    nex = rewrite_nex_to_diff(p)
    if nex.applicability == REJECTED:
        return RewriteResult(p, "normalize", applicability=REJECTED, reason=nex.reason,
                             violations=nex.violations)
    opt = rewrite_opt_to_diff(nex.output, error_as_false)
    mns = rewrite_minus_to_diff(opt.output)
    return RewriteResult(mns.output, "normalize", fresh_vars=mns.fresh_vars)


# -- negation as failure ---------------------------------------------------

NAF_SCHEMES = ("naive", "perez", "polleres", "polleres-as-printed")


class NoWitnessVariable(ValueError):
    pass


def encode_naf(p1: Pattern, p2: Pattern, scheme: str = "polleres",
               fresh: FreshVars | None = None, witness: Term | None = None) -> Pattern:
    """Encode ``(p1 DIFF p2)`` with OPT and ``!bound``.

    ``polleres`` probes the reserved auxiliary graph inside the optional arm;
    ``polleres-as-printed`` conjoins the probe outside the OPT.
    """
    if fresh is None:
        fresh = FreshVars(var_set(p1) | var_set(p2))
    if scheme == "naive":
        candidates = sorted(var_set(p2) - var_set(p1))
        if witness is None:
            if not candidates:
                raise NoWitnessVariable("no variable of P2 is absent from P1")
            witness = candidates[0]
        elif witness not in candidates:
            raise NoWitnessVariable(f"{witness} must occur in P2 but not in P1")
        return Filter(Opt(p1, p2), Neg(Bound(witness)))
    if scheme == "perez":
        x1, x2, x3 = (fresh.new(n) for n in ("F1", "F2", "F3"))
        return Filter(Opt(p1, And(p2, TriplePattern(x1, x2, x3))), Neg(Bound(x1)))
    probe_var = fresh.new("FX")
    probe = GraphPattern(NAF_GRAPH, TriplePattern(probe_var, iri(":p"), iri(":o")))
    if scheme == "polleres":
        return Filter(Opt(p1, And(p2, probe)), Neg(Bound(probe_var)))
    if scheme == "polleres-as-printed":
        return Filter(And(Opt(p1, p2), probe), Neg(Bound(probe_var)))
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {NAF_SCHEMES}")


def rewrite_diff_to_naf(p: Pattern, scheme: str) -> RewriteResult:
    rule = f"naf:{scheme}"
    if not _contains(p, Diff):
        return RewriteResult(p, rule, applicability=INAPPLICABLE, reason="no DIFF")
    fresh = FreshVars(var_set(p))
    try:
        out = _bottom_up(p, lambda n: encode_naf(n.left, n.right, scheme, fresh)
                         if isinstance(n, Diff) else n)
    except NoWitnessVariable as exc:
        return RewriteResult(p, rule, applicability=REJECTED, reason=str(exc))
    return RewriteResult(out, rule, fresh_vars=list(fresh.generated))


# -- algebra level ---------------------------------------------------------

class MissingDomains(ValueError):
    pass


def diff_to_core(a, b, f: Formula, error_as_false=True):
    """Simple-difference form of ``a \\_f b`` (both error readings).  Exact
    when the mappings of ``a`` share one domain."""
    j = alg.Join(a, b)
    if error_as_false:
        return alg.SDiff(a, alg.Select(f, j))
    errors = alg.SDiff(j, alg.Select(Disj(f, Neg(f)), j))
    return alg.SDiff(a, alg.Union(alg.Select(f, j), errors))


def leftjoin_to_core(a, b, f: Formula, error_as_false=True):
    return alg.Union(alg.Select(f, alg.Join(a, b)), diff_to_core(a, b, f, error_as_false))


def minus_to_core(a, b, dom_a, dom_b, fresh: FreshVars):
    shared = sorted(set(dom_a) & set(dom_b))
    if not shared:
        return a
    renaming = {v: fresh.new(v.lexical) for v in shared}
    cond = conjoin(Eq(v, renaming[v]) for v in shared)
    return alg.SDiff(a, alg.Select(cond, alg.Join(a, alg.Rename(_pairs(renaming), b))))


def _pairs(renaming: dict) -> tuple:
    return tuple(sorted(renaming.items()))


def _union_all(exprs):
    exprs = list(exprs)
    acc = exprs[0]
    for e in exprs[1:]:
        acc = alg.Union(acc, e)
    return acc


def domain_slices(a, dom_a):
    """Partition ``a`` by exact domain: one selection per subset of ``dom_a``."""
    dom_a = sorted(dom_a)
    if not dom_a:
        return [((), a)]
    out = []
    for r in range(len(dom_a) + 1):
        for chosen in itertools.combinations(dom_a, r):
            guard = conjoin([Bound(v) for v in chosen]
                            + [Neg(Bound(v)) for v in dom_a if v not in chosen])
            out.append((chosen, alg.Select(guard, a)))
    return out


def sliced_diff_to_core(a, b, f, dom_a, error_as_false=True):
    # Inside one slice every mapping has the same domain, so a mapping is
    # compatible with a joined row only through itself.
    cond = f if error_as_false else Disj(f, error_detector(f))
    return _union_all(alg.SDiff(s, alg.Select(cond, alg.Join(s, b)))
                      for _, s in domain_slices(a, dom_a))


def sliced_minus_to_core(a, b, dom_a, dom_b, fresh: FreshVars):
    renaming = {v: fresh.new(v.lexical) for v in sorted(dom_b)}
    renamed = alg.Rename(_pairs(renaming), b)
    parts = []
    for chosen, s in domain_slices(a, dom_a):
        shared = [v for v in chosen if v in renaming]
        if not shared:
            parts.append(s)
            continue
        agree = conjoin(Disj(Neg(Bound(renaming[v])), Eq(v, renaming[v])) for v in shared)
        overlap = disjoin(Bound(renaming[v]) for v in shared)
        parts.append(alg.SDiff(s, alg.Select(Conj(agree, overlap), alg.Join(s, renamed))))
    return _union_all(parts)


def rewrite_algebra_to_core(e, error_as_false: bool = True, *, domains: dict | None = None,
                            sliced: bool = False):
    """Eliminate difference, left-join and minus.

    The default constructions are the textbook forms; they assume the
    operands' mappings share one domain.  ``sliced=True`` partitions the left
    operand by exact domain first, which makes the rewrite exact for any
    inputs.  ``domains`` (leaf name -> variables) is required for minus and
    for the sliced constructions.
    """
    taken = set()
    for vs in (domains or {}).values():
        taken |= set(vs)
    for x in alg.subexpressions(e):
        if isinstance(x, (alg.Select, alg.Diff, alg.LeftJoin)):
            taken |= formula_vars(x.formula)
        elif isinstance(x, alg.Rename):
            taken |= {v for pair in x.renaming for v in pair}
    fresh = FreshVars(taken)

    def dom(x):
        if domains is None:
            raise MissingDomains("leaf domains are required for this rewrite")
        return alg.static_domain(x, domains)

    def rw(x):
        match x:
            case alg.Input():
                return x
            case alg.Project(vs, arg):
                return alg.Project(vs, rw(arg))
            case alg.Select(f, arg):
                return alg.Select(f, rw(arg))
            case alg.Rename(r, arg):
                return alg.Rename(r, rw(arg))
            case alg.Join(l, r):
                return alg.Join(rw(l), rw(r))
            case alg.Union(l, r):
                return alg.Union(rw(l), rw(r))
            case alg.SDiff(l, r):
                return alg.SDiff(rw(l), rw(r))
            case alg.Diff(f, l, r):
                l, r = rw(l), rw(r)
                if sliced:
                    return sliced_diff_to_core(l, r, f, dom(l), error_as_false)
                return diff_to_core(l, r, f, error_as_false)
            case alg.LeftJoin(f, l, r):
                l, r = rw(l), rw(r)
                if sliced:
                    return alg.Union(alg.Select(f, alg.Join(l, r)),
                                     sliced_diff_to_core(l, r, f, dom(l), error_as_false))
                return leftjoin_to_core(l, r, f, error_as_false)
            case alg.Minus(l, r):
                l, r = rw(l), rw(r)
                if sliced:
                    return sliced_minus_to_core(l, r, dom(l), dom(r), fresh)
                return minus_to_core(l, r, dom(l), dom(r), fresh)
        raise TypeError(f"not an algebra expression: {x!r}")

    return rw(e)


def pattern_to_algebra(p: Pattern):
    """Translate a pattern into an algebra expression.

    Triple patterns, UNIT, GRAPH and NOT-EXISTS subpatterns become opaque
    leaves named by their DSL text.  Returns ``(expr, leaves)`` where
    ``leaves`` maps leaf names to subpatterns.
    """
    from .surface import print_pattern

    leaves: dict[str, Pattern] = {}

    def tr(q):
        match q:
            case And(l, r):
                return alg.Join(tr(l), tr(r))
            case Union(l, r):
                return alg.Union(tr(l), tr(r))
            case Opt(l, Filter(inner, cond)):
                return alg.LeftJoin(cond, tr(l), tr(inner))
            case Opt(l, r):
                return alg.LeftJoin(TRUE, tr(l), tr(r))
            case Minus(l, r):
                return alg.Minus(tr(l), tr(r))
            case Diff(l, r):
                return alg.SDiff(tr(l), tr(r))
            case Filter(inner, cond):
                return alg.Select(cond, tr(inner))
        name = print_pattern(q)
        leaves[name] = q
        return alg.Input(name)

    return tr(p), leaves


def leaf_domains(leaves: dict) -> dict:
    return {name: frozenset(var_set(q)) for name, q in leaves.items()}
