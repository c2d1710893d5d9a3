import pytest

from sparqlneg.rdf import iri, literal, var
from sparqlneg.solutions import (EMPTY, MU0, OMEGA0, IncompatibleMappings, Mapping,
                                 MappingMultiset, compatible, from_records, merge, multiset,
                                 restrict)

X, Y, Z = var("X"), var("Y"), var("Z")
A, B = iri(":a"), iri(":b")


def test_mapping_rejects_non_variable_keys_and_variable_values():
    with pytest.raises(TypeError):
        Mapping({A: B})
    with pytest.raises(TypeError):
        Mapping({X: Y})


def test_mapping_is_canonical():
    m1 = Mapping({X: A, Y: B})
    m2 = Mapping({Y: B, X: A})
    assert m1 == m2 and hash(m1) == hash(m2)
    assert m1.key() == "?X=:a ?Y=:b"
    assert str(m1) == "{?X→:a, ?Y→:b}"
    assert str(MU0) == "μ0"


def test_compatibility_and_merge():
    assert compatible(MU0, Mapping({X: A}))
    assert compatible(Mapping({X: A}), Mapping({Y: B}))
    assert not compatible(Mapping({X: A}), Mapping({X: B}))
    assert merge(Mapping({X: A}), Mapping({Y: B})) == Mapping({X: A, Y: B})
    with pytest.raises(IncompatibleMappings):
        merge(Mapping({X: A}), Mapping({X: B}))


def test_restrict():
    assert restrict(Mapping({X: A, Y: B}), [X, Z]) == Mapping({X: A})


def test_multiset_counts_and_equality():
    o = multiset(({X: A}, 1), ({X: B}, 2), ({X: A}, 1))
    assert o.card(Mapping({X: A})) == 2
    assert o.total() == 4 and len(o) == 2
    assert o == MappingMultiset.of(Mapping({X: A}), Mapping({X: A}), Mapping({X: B}),
                                   Mapping({X: B}))
    assert o.distinct().total() == 2
    assert o.domain() == {X}
    assert EMPTY != OMEGA0 and not EMPTY and OMEGA0.total() == 1


def test_zero_cardinality_is_dropped_and_negative_rejected():
    assert multiset(({X: A}, 0)) == EMPTY
    with pytest.raises(ValueError):
        multiset(({X: A}, -1))


def test_records_roundtrip_in_canonical_order():
    o = multiset(({Y: B, X: A}, 1), ({X: literal('say "hi"')}, 3))
    records = o.to_records()
    assert records[0] == {"bindings": {"?X": '"say \\"hi\\""'}, "card": 3}
    assert records[1] == {"bindings": {"?X": ":a", "?Y": ":b"}, "card": 1}
    assert from_records(records) == o


def test_str():
    assert str(EMPTY) == "∅"
    assert str(OMEGA0) == "{μ0:1}"
