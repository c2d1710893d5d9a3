"""Selection formulas, filter constraints and three-valued evaluation."""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass
from typing import Union

from .rdf import Term, iri, literal, var


class TruthValue(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    ERROR = "error"

    def __str__(self):
        return self.value


T, F, E = TruthValue.TRUE, TruthValue.FALSE, TruthValue.ERROR


def and3(p: TruthValue, q: TruthValue) -> TruthValue:
    if p is F or q is F:
        return F
    if p is E or q is E:
        return E
    return T


def or3(p: TruthValue, q: TruthValue) -> TruthValue:
    if p is T or q is T:
        return T
    if p is E or q is E:
        return E
    return F


def not3(p: TruthValue) -> TruthValue:
    if p is E:
        return E
    return F if p is T else T


# -- formula trees ---------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Eq:
    """``left = right``; either side may be a variable or a ground term."""
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Bound:
    """``bound(term)``.  A ground operand (after substitution) is bound."""
    term: Term


@dataclass(frozen=True, slots=True)
class Const:
    value: bool


@dataclass(frozen=True, slots=True)
class Neg:
    arg: "Formula"


@dataclass(frozen=True, slots=True)
class Conj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Disj:
    left: "Formula"
    right: "Formula"


Formula = Union[Eq, Bound, Const, Neg, Conj, Disj]

TRUE = Const(True)
FALSE = Const(False)


def _value(t: Term, m):
    if t.is_var:
        return m.get(t)
    return t


def eval_formula(f: Formula, m) -> TruthValue:
    """Evaluate ``f`` under mapping ``m`` (anything with ``get(var)``)."""
    match f:
        case Eq(left, right):
            a, b = _value(left, m), _value(right, m)
            if a is None or b is None:
                return E
            return T if a == b else F
        case Bound(term):
            return T if _value(term, m) is not None else F
        case Const(value):
            return T if value else F
        case Neg(arg):
            return not3(eval_formula(arg, m))
        case Conj(left, right):
            return and3(eval_formula(left, m), eval_formula(right, m))
        case Disj(left, right):
            return or3(eval_formula(left, m), eval_formula(right, m))
    raise TypeError(f"not a formula: {f!r}")


@functools.lru_cache(maxsize=4096)
def compile_formula(f: Formula):
    """Return a function ``m -> TruthValue`` equivalent to ``eval_formula(f, m)``.

    Used by the bulk operators, which evaluate one formula over many mappings.
    """
    match f:
        case Eq(left, right):
            if left.is_var and right.is_var:
                def eq(m):
                    a, b = m.get(left), m.get(right)
                    if a is None or b is None:
                        return E
                    return T if a == b else F
                return eq
            if left.is_var or right.is_var:
                v, c = (left, right) if left.is_var else (right, left)

                def eq_const(m):
                    a = m.get(v)
                    if a is None:
                        return E
                    return T if a == c else F
                return eq_const
            value = T if left == right else F
            return lambda m: value
        case Bound(term):
            if not term.is_var:
                return lambda m: T
            return lambda m: T if m.get(term) is not None else F
        case Const(value):
            tv = T if value else F
            return lambda m: tv
        case Neg(arg):
            g = compile_formula(arg)
            return lambda m: not3(g(m))
        case Conj(left, right):
            g, h = compile_formula(left), compile_formula(right)
            return lambda m: and3(g(m), h(m))
        case Disj(left, right):
            g, h = compile_formula(left), compile_formula(right)
            return lambda m: or3(g(m), h(m))
    raise TypeError(f"not a formula: {f!r}")


def formula_vars(f: Formula) -> set[Term]:
    match f:
        case Eq(left, right):
            return {t for t in (left, right) if t.is_var}
        case Bound(term):
            return {term} if term.is_var else set()
        case Const():
            return set()
        case Neg(arg):
            return formula_vars(arg)
        case Conj(left, right) | Disj(left, right):
            return formula_vars(left) | formula_vars(right)
    raise TypeError(f"not a formula: {f!r}")


def substitute_formula(f: Formula, m) -> Formula:
    """Replace variables bound in ``m``; ``bound(?X)`` with ``?X`` bound
    becomes ``true``."""
    match f:
        case Eq(left, right):
            return Eq(_subst_term(left, m), _subst_term(right, m))
        case Bound(term):
            if term.is_var and m.get(term) is not None:
                return TRUE
            return f
        case Const():
            return f
        case Neg(arg):
            return Neg(substitute_formula(arg, m))
        case Conj(left, right):
            return Conj(substitute_formula(left, m), substitute_formula(right, m))
        case Disj(left, right):
            return Disj(substitute_formula(left, m), substitute_formula(right, m))
    raise TypeError(f"not a formula: {f!r}")


def rename_formula(f: Formula, renaming: dict) -> Formula:
    match f:
        case Eq(left, right):
            return Eq(renaming.get(left, left), renaming.get(right, right))
        case Bound(term):
            return Bound(renaming.get(term, term))
        case Const():
            return f
        case Neg(arg):
            return Neg(rename_formula(arg, renaming))
        case Conj(left, right):
            return Conj(rename_formula(left, renaming), rename_formula(right, renaming))
        case Disj(left, right):
            return Disj(rename_formula(left, renaming), rename_formula(right, renaming))
    raise TypeError(f"not a formula: {f!r}")


def _subst_term(t: Term, m) -> Term:
    if t.is_var:
        v = m.get(t)
        if v is not None:
            return v
    return t


def conjoin(formulas) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    formulas = list(formulas)
    if not formulas:
        return TRUE
    acc = formulas[0]
    for f in formulas[1:]:
        acc = Conj(acc, f)
    return acc


def disjoin(formulas) -> Formula:
    formulas = list(formulas)
    if not formulas:
        return FALSE
    acc = formulas[0]
    for f in formulas[1:]:
        acc = Disj(acc, f)
    return acc


def error_detector(f: Formula) -> Formula:
    """A two-valued formula that is true exactly where ``f`` is error.

    Built from ``bound`` atoms and guarded copies of subformulas, so it never
    evaluates to error itself.
    """
    match f:
        case Eq(left, right):
            return disjoin(Neg(Bound(t)) for t in (left, right) if t.is_var)
        case Bound() | Const():
            return FALSE
        case Neg(arg):
            return error_detector(arg)
        case Conj(left, right):
            return conjoin([Neg(is_false(left)), Neg(is_false(right)),
                            Disj(error_detector(left), error_detector(right))])
        case Disj(left, right):
            return conjoin([Neg(is_true(left)), Neg(is_true(right)),
                            Disj(error_detector(left), error_detector(right))])
    raise TypeError(f"not a formula: {f!r}")


def is_true(f: Formula) -> Formula:
    return Conj(f, Neg(error_detector(f)))


def is_false(f: Formula) -> Formula:
    return Conj(Neg(f), Neg(error_detector(f)))


# -- filter constraints ----------------------------------------------------
#
# Constraints use the SPARQL surface connectives (!, &&, ||).  They translate
# one-to-one onto formulas; atoms are shared.

@dataclass(frozen=True, slots=True)
class CNot:
    arg: "Constraint"


@dataclass(frozen=True, slots=True)
class CAnd:
    left: "Constraint"
    right: "Constraint"


@dataclass(frozen=True, slots=True)
class COr:
    left: "Constraint"
    right: "Constraint"


Constraint = Union[Eq, Bound, Const, CNot, CAnd, COr]


def constraint_to_formula(c: Constraint) -> Formula:
    match c:
        case CNot(arg):
            return Neg(constraint_to_formula(arg))
        case CAnd(left, right):
            return Conj(constraint_to_formula(left), constraint_to_formula(right))
        case COr(left, right):
            return Disj(constraint_to_formula(left), constraint_to_formula(right))
        case Eq() | Bound() | Const():
            return c
    raise TypeError(f"not a filter constraint: {c!r}")


def formula_to_constraint(f: Formula) -> Constraint:
    match f:
        case Neg(arg):
            return CNot(formula_to_constraint(arg))
        case Conj(left, right):
            return CAnd(formula_to_constraint(left), formula_to_constraint(right))
        case Disj(left, right):
            return COr(formula_to_constraint(left), formula_to_constraint(right))
        case Eq() | Bound() | Const():
            return f
    raise TypeError(f"not a formula: {f!r}")


_CTOKEN = re.compile(r'\s*(\|\||&&|!|\(|\)|=|bound\b|true\b|false\b|\?[A-Za-z_][\w\']*|'
                     r':[\w\-.]*|<[^>\s]*>|"(?:[^"\\]|\\.)*")')


class ConstraintSyntaxError(ValueError):
    pass


def parse_constraint(text: str) -> Constraint:
    """Parse ``!``/``&&``/``||`` constraint syntax, e.g. ``!(bound(?X))``."""
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        mo = _CTOKEN.match(text, pos)
        if not mo:
            raise ConstraintSyntaxError(f"unexpected input at offset {pos}: {text[pos:pos+10]!r}")
        tokens.append(mo.group(1))
        pos = mo.end()
    parser = _ConstraintParser(tokens)
    c = parser.disjunction()
    if parser.i != len(tokens):
        raise ConstraintSyntaxError(f"trailing tokens: {tokens[parser.i:]}")
    return c


class _ConstraintParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ConstraintSyntaxError(f"expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def disjunction(self):
        left = self.conjunction()
        while self.peek() == "||":
            self.take()
            left = COr(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek() == "&&":
            self.take()
            left = CAnd(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return CNot(self.unary())
        if tok == "(":
            self.take()
            inner = self.disjunction()
            self.take(")")
            return inner
        if tok == "bound":
            self.take()
            self.take("(")
            t = self.term()
            self.take(")")
            return Bound(t)
        if tok in ("true", "false"):
            self.take()
            return Const(tok == "true")
        left = self.term()
        self.take("=")
        return Eq(left, self.term())

    def term(self) -> Term:
        tok = self.take()
        if tok.startswith("?"):
            return var(tok[1:])
        if tok.startswith('"'):
            return literal(tok[1:-1].replace('\\"', '"').replace("\\\\", "\\"))
        if tok.startswith(":") or tok.startswith("<"):
            return iri(tok)
        raise ConstraintSyntaxError(f"expected a term, got {tok!r}")


def print_constraint(c: Constraint) -> str:
    match c:
        case CNot(arg):
            return f"!({print_constraint(arg)})"
        case CAnd(left, right):
            return f"({print_constraint(left)} && {print_constraint(right)})"
        case COr(left, right):
            return f"({print_constraint(left)} || {print_constraint(right)})"
        case Eq(left, right):
            return f"({left} = {right})"
        case Bound(term):
            return f"bound({term})"
        case Const(value):
            return "true" if value else "false"
    raise TypeError(f"not a filter constraint: {c!r}")
