import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from theorypatch.errors import CycleError, ParseError, TheoryError, UnresolvedComponent
from theorypatch.evaluation import classify
from theorypatch.generate import random_theory
from theorypatch.theory import (
    Clause,
    ClauseId,
    Example,
    LitId,
    PatchableTheory,
    PropId,
    Theory,
    delete_component,
    enumerate_components,
    parse_component_id,
    parse_examples,
    parse_open,
    parse_theory,
    serialize_examples,
    serialize_open,
    serialize_theory,
)

seeds = st.integers(0, 2**32 - 1)


def test_cup_shape(cup):
    assert cup.root == "cup"
    assert len(cup.clauses) == 7
    assert len(cup.primitives) == 9


def test_cup_component_count(cup):
    ids = enumerate_components(cup)
    kinds = [type(c) for c in ids]
    assert (kinds.count(PropId), kinds.count(ClauseId), kinds.count(LitId)) == (5, 7, 13)


def test_undeclared_bodiless_is_primitive():
    t = parse_theory("root r.\nr :- p.")
    assert t.primitives == {"p"}


def test_declared_primitive_without_use():
    t = parse_theory("root r.\nprimitive z.\nr.")
    assert "z" in t.primitives
    assert parse_theory(serialize_theory(t)) == t


def test_cycle_rejected():
    with pytest.raises(CycleError):
        parse_theory("root r.\nr :- s.\ns :- r.")


def test_primitive_head_rejected():
    with pytest.raises(TheoryError):
        parse_theory("root r.\nprimitive a.\na :- b.\nr :- a.")


def test_missing_root():
    with pytest.raises(TheoryError, match="root"):
        parse_theory("r :- a.")


def test_syntax_error_position():
    with pytest.raises(ParseError) as info:
        parse_theory("root r.\nr :- a, 3x.")
    assert info.value.line == 2
    assert info.value.column == 8


def test_fact_and_negation_serialize():
    t = parse_theory("root r.\nr :- not s.\ns.")
    text = serialize_theory(t)
    assert "r :- not s." in text
    assert "\ns.\n" in text


def test_single_fact_components():
    t = parse_theory("root r.\nr.")
    assert enumerate_components(t) == [PropId("r"), ClauseId("r", 0)]


def test_duplicate_literal_occurrences():
    t = parse_theory("root r.\nr :- a, a.")
    assert [c for c in enumerate_components(t) if isinstance(c, LitId)] == [
        LitId("r", 0, 0), LitId("r", 0, 1)
    ]


def test_delete_ceramic_literal(cup):
    t = delete_component(cup, LitId("graspable", 1, 1))
    assert "graspable :- small, dry." in serialize_theory(t)


def test_delete_clause_gives_spec(cup):
    from conftest import CUP_SPECIFIC, clause_lines

    text = serialize_theory(delete_component(cup, ClauseId("graspable", 0)))
    assert clause_lines(text) == CUP_SPECIFIC


def test_delete_prop_forces_true(cup):
    t = delete_component(cup, PropId("open"))
    assert classify(t, Example({"has_bottom", "light_weight", "has_handle"}))


def test_ids_stable_after_deletion(cup):
    t = delete_component(cup, ClauseId("graspable", 0))
    assert t.resolves(ClauseId("graspable", 1))
    assert t.resolves(LitId("graspable", 1, 2))
    with pytest.raises(UnresolvedComponent):
        delete_component(t, ClauseId("graspable", 0))
    t2 = delete_component(t, LitId("graspable", 1, 0))
    with pytest.raises(UnresolvedComponent):
        delete_component(t2, LitId("graspable", 1, 0))


def test_component_id_text_round_trip(cup):
    for c in enumerate_components(cup):
        assert parse_component_id(str(c)) == c


def test_open_file_rejects_unknown_and_primitive(cup):
    with pytest.raises(UnresolvedComponent):
        PatchableTheory(cup, {PropId("small")})
    with pytest.raises(UnresolvedComponent):
        PatchableTheory(cup, {ClauseId("graspable", 5)})
    assert parse_open(serialize_open(enumerate_components(cup))) == frozenset(enumerate_components(cup))


def test_examples_round_trip(e1_e4):
    assert parse_examples(serialize_examples(e1_e4)) == e1_e4
    with pytest.raises(ParseError):
        parse_examples("? a")


def test_theory_constructor_validates():
    with pytest.raises(TheoryError):
        Theory("r", (Clause("a"),), frozenset({"a"}))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_parse_serialize_identity(seed):
    t = random_theory(random.Random(seed))
    assert parse_theory(serialize_theory(t)) == t


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_enumeration_stable_and_resolving(seed):
    t = random_theory(random.Random(seed))
    ids = enumerate_components(t)
    assert ids == enumerate_components(t)
    assert len(set(ids)) == len(ids)
    assert all(t.resolves(c) for c in ids)
