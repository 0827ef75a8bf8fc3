import random

import pytest
from conftest import fixture_text
from hypothesis import given, settings
from hypothesis import strategies as st

from theorypatch.errors import PreconditionError, TheoryError
from theorypatch.evaluation import classify
from theorypatch.firstorder import (
    FOLabeledExample,
    FORevision,
    apply_fo_revision,
    classify_fo,
    compute_fo_parity,
    fpatch,
    parse_fo_examples,
    parse_fo_theory,
    propositional_example,
    propositionalize,
    serialize_fo_examples,
    serialize_fo_theory,
    validate_fo,
)
from theorypatch.generate import random_quasi_propositional
from theorypatch.parity import compute_parity
from theorypatch.patch import RevisionKind, Unrepairable
from theorypatch.reductions import CNF, monotone_lit, monotone_sat_to_fpatch_ground
from theorypatch.theory import ClauseId, LitId, PatchableTheory, PropId, parse_open

seeds = st.integers(0, 2**32 - 1)

COMPLETELY_BOUND = """\
root r/3.
r(X,Y,Z) :- q(X,Y), s(Y,Z).
q(X,Y) :- t(X).
q(X,Y) :- t(Y), s(Y,X).
"""

QUASI = """\
root r/3.
r(X,Y,Z) :- q(X,Y,Z), s(X,Y,Z).
q(X,Y,Z) :- t(X,Y,Z).
q(X,Y,Z) :- t(X,Y,Z), s(X,Y,Z).
"""

NOT_QUASI = """\
root r/3.
r(X,Y,Z) :- q(X,Y,Z), s(X,Y,Z).
q(X,Y,Z) :- t(Y,X,Z).
q(X,Y,Z) :- t(X,Y,Z), s(Z,Y,X).
"""


def test_display_theories():
    cb = validate_fo(parse_fo_theory(COMPLETELY_BOUND))
    assert cb.completely_bound and not cb.quasi_propositional
    assert validate_fo(parse_fo_theory(QUASI)).quasi_propositional
    nq = validate_fo(parse_fo_theory(NOT_QUASI))
    assert not nq.quasi_propositional
    assert "t(Y,X,Z)" in nq.offending


def test_quasi_propositionalized_names():
    t = parse_fo_theory(QUASI)
    bundle, hat = propositionalize(PatchableTheory(t), [FOLabeledExample(("a", "b", "c"), True)])
    assert bundle.theory.propositions == {"r", "q", "s", "t"}
    assert bundle.theory.primitives == {"s", "t"}
    assert hat[0].example.true == frozenset()


def test_round_trip_fixture():
    t = parse_fo_theory(fixture_text("qp.fo"))
    assert parse_fo_theory(serialize_fo_theory(t)) == t
    es = parse_fo_examples(fixture_text("qp.fex"))
    assert parse_fo_examples(serialize_fo_examples(es)) == es


def test_ground_fact_lookup():
    t = parse_fo_theory("root r/1.\nr(X) :- one(X).\none(1).\n")
    assert classify_fo(t, ("1",)) is True
    assert classify_fo(t, ("0",)) is False
    with pytest.raises(TheoryError):
        classify_fo(t, ("0", "1"))


def test_non_ground_fact():
    t = parse_fo_theory("root r/3.\nr(X,Y,W) :- zero_1(X,Y,W).\nzero_1(0,Y,W).\n")
    assert classify_fo(t, ("0", "1", "1")) is True
    assert classify_fo(t, ("1", "0", "0")) is False
    assert not validate_fo(t).ground_facts_only


def test_existential_negation():
    t = parse_fo_theory("root r/1.\nr(X) :- a(X), not b(Y).\na(1).\nb(2).\n")
    assert classify_fo(t, ("1",)) is False


def test_fpatch_fixture():
    t = parse_fo_theory(fixture_text("qp.fo"))
    pt = PatchableTheory(t, parse_open(fixture_text("qp.open")))
    es = parse_fo_examples(fixture_text("qp.fex"))
    result = fpatch(pt, es)
    assert result.repaired
    assert result.revisions[0] == FORevision(LitId("r", 0, 1), RevisionKind.DELETE)
    assert all(classify_fo(result.theory, e) == e.label for e in es)


def test_fpatch_unrepairable():
    t = parse_fo_theory("root r/1.\nr(X) :- a(X), b(X).\na(1).\n")
    pt = PatchableTheory(t, {ClauseId("r", 0)})
    assert isinstance(fpatch(pt, [FOLabeledExample(("1",), True)]), Unrepairable)


def test_fpatch_rejects_non_quasi():
    pt, es = monotone_sat_to_fpatch_ground(CNF(("v1",), ((("v1", True),),)))
    with pytest.raises(PreconditionError, match="q1"):
        fpatch(pt, es)


def test_fo_disable_uses_fact_predicate():
    t = parse_fo_theory(fixture_text("qp.fo"))
    r = FORevision(ClauseId("q", 0), RevisionKind.DISABLE, frozenset({("a", "b", "c")}))
    revised, texts = apply_fo_revision(t, r)
    assert texts == ("q(X,Y,Z) :- t(X,Y,Z), not _aux_c_q_0_0(X,Y,Z).", "_aux_c_q_0_0(a,b,c).")
    assert classify_fo(revised, ("a", "b", "c")) is True  # second q clause still fires
    assert classify_fo(revised, ("b", "b", "c")) is False
    r2 = FORevision(PropId("q"), RevisionKind.DISABLE, frozenset({("c", "c", "c")}))
    revised2, _ = apply_fo_revision(t, r2)
    assert validate_fo(revised2).ground_facts_only


def test_monotone_instance_uses_literal_ids():
    pt, _ = monotone_sat_to_fpatch_ground(CNF(("v1", "v2"), ((("v1", True), ("v2", True)),)))
    assert pt.open == {monotone_lit(1), monotone_lit(2)}


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_propositionalization_preserves_classification(seed):
    pt, es = random_quasi_propositional(random.Random(seed))
    t = pt.theory
    hat = t.skeleton
    for e in es:
        assert classify_fo(t, e) == classify(hat, propositional_example(t, e.args))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_parity_preserved(seed):
    pt, es = random_quasi_propositional(random.Random(seed))
    bundle, _ = propositionalize(pt, es)
    assert compute_fo_parity(pt.theory) == compute_parity(bundle.theory)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_fpatch_repairs_verify(seed):
    pt, es = random_quasi_propositional(random.Random(seed))
    result = fpatch(pt, es)
    if result.repaired:
        assert all(classify_fo(result.theory, e) == e.label for e in es)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_quasi_implies_completely_bound(seed):
    pt, _ = random_quasi_propositional(random.Random(seed))
    report = validate_fo(pt.theory)
    assert report.quasi_propositional and report.completely_bound
