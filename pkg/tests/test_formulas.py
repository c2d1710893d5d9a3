import pytest
from hypothesis import given, settings

from sparqlneg import formulas as fm
from sparqlneg.formulas import E, F, T
from sparqlneg.rdf import iri, var
from sparqlneg.solutions import MU0, Mapping

import oracle
from strategies import filters, mappings, to_formula

X, Y = var("X"), var("Y")
A, B = iri(":a"), iri(":b")

TV = {"T": T, "F": F, "E": E}


@pytest.mark.parametrize("p", "TFE")
@pytest.mark.parametrize("q", "TFE")
def test_binary_connectives_match_truth_tables(p, q):
    assert fm.and3(TV[p], TV[q]) is TV[oracle.AND[(p, q)]]
    assert fm.or3(TV[p], TV[q]) is TV[oracle.OR[(p, q)]]


@pytest.mark.parametrize("p", "TFE")
def test_negation(p):
    assert fm.not3(TV[p]) is TV[oracle.NOT[p]]


def test_atoms():
    m = Mapping({X: A})
    assert fm.eval_formula(fm.Bound(X), m) is T
    assert fm.eval_formula(fm.Bound(Y), m) is F
    assert fm.eval_formula(fm.Eq(X, A), m) is T
    assert fm.eval_formula(fm.Eq(X, B), m) is F
    assert fm.eval_formula(fm.Eq(X, Y), m) is E
    assert fm.eval_formula(fm.Eq(Y, A), MU0) is E
    assert fm.eval_formula(fm.Eq(A, A), MU0) is T


def test_error_propagates_through_negation_but_not_through_false_conjunct():
    m = Mapping({X: A})
    err = fm.Eq(Y, A)
    assert fm.eval_formula(fm.Neg(err), m) is E
    assert fm.eval_formula(fm.Conj(err, fm.FALSE), m) is F
    assert fm.eval_formula(fm.Disj(err, fm.TRUE), m) is T


@settings(max_examples=300)
@given(filters, mappings())
def test_eval_formula_agrees_with_reference(f, m):
    mu = Mapping({var(k): iri(v) for k, v in m.items()})
    assert fm.eval_formula(to_formula(f), mu).name[0] == oracle.truth(f, m)


@settings(max_examples=300)
@given(filters, mappings())
def test_compiled_formula_agrees_with_reference(f, m):
    mu = Mapping({var(k): iri(v) for k, v in m.items()})
    assert fm.compile_formula(to_formula(f))(mu).name[0] == oracle.truth(f, m)


@settings(max_examples=300)
@given(filters, mappings())
def test_error_detector_is_two_valued_and_exact(f, m):
    mu = Mapping({var(k): iri(v) for k, v in m.items()})
    formula = to_formula(f)
    detected = fm.eval_formula(fm.error_detector(formula), mu)
    assert detected is not E
    assert (detected is T) == (fm.eval_formula(formula, mu) is E)


def test_substitution_turns_bound_of_bound_variable_into_true():
    f = fm.Conj(fm.Bound(X), fm.Eq(X, Y))
    assert fm.substitute_formula(f, Mapping({X: A})) == fm.Conj(fm.TRUE, fm.Eq(A, Y))


def test_conjoin_and_disjoin_units():
    assert fm.conjoin([]) == fm.TRUE
    assert fm.disjoin([]) == fm.FALSE
    assert fm.conjoin([fm.Bound(X), fm.Bound(Y)]) == fm.Conj(fm.Bound(X), fm.Bound(Y))


def test_formula_vars_and_rename():
    f = fm.Disj(fm.Eq(X, A), fm.Neg(fm.Bound(Y)))
    assert fm.formula_vars(f) == {X, Y}
    renamed = fm.rename_formula(f, {X: var("X'")})
    assert fm.formula_vars(renamed) == {var("X'"), Y}


@pytest.mark.parametrize("text, expected", [
    ("bound(?X)", fm.Bound(X)),
    ("!bound(?X)", fm.CNot(fm.Bound(X))),
    ("?X = :a && ?Y = :b || !bound(?Y)",
     fm.COr(fm.CAnd(fm.Eq(X, A), fm.Eq(Y, B)), fm.CNot(fm.Bound(Y)))),
    ("(true)", fm.TRUE),
])
def test_parse_constraint(text, expected):
    assert fm.parse_constraint(text) == expected


@pytest.mark.parametrize("text", ["bound(", "?X =", "&& bound(?X)", "?X ~ :a"])
def test_parse_constraint_rejects_malformed(text):
    with pytest.raises(fm.ConstraintSyntaxError):
        fm.parse_constraint(text)


@given(filters)
def test_constraint_roundtrip(f):
    formula = to_formula(f)
    c = fm.formula_to_constraint(formula)
    assert fm.constraint_to_formula(c) == formula
    assert fm.constraint_to_formula(fm.parse_constraint(fm.print_constraint(c))) == formula
