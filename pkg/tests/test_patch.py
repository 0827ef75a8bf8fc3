import random
from itertools import permutations

import pytest
from conftest import fixture_text
from hypothesis import given, settings
from hypothesis import strategies as st

import theorypatch.patch as patch_mod
from theorypatch.errors import PreconditionError
from theorypatch.evaluation import classify, classify_view
from theorypatch.generate import random_examples, random_patchable
from theorypatch.patch import (
    Repaired,
    Revision,
    RevisionKind,
    Unrepairable,
    fresh_aux_name,
    oracle_patch,
    pbenign,
    ppatch,
    synthesize,
    synthesized_clauses,
    verify_patch,
)
from theorypatch.theory import (
    ClauseId,
    LabeledExample,
    LitId,
    PatchableTheory,
    Policy,
    PropId,
    parse_examples,
    parse_open,
    parse_theory,
)

seeds = st.integers(0, 2**32 - 1)
CERAMIC = LitId("graspable", 1, 1)
HANDLE_CLAUSE = ClauseId("graspable", 0)


def test_pbenign_ceramic(cup_pt, e1_e4):
    assert pbenign(cup_pt, CERAMIC, e1_e4) == Revision(CERAMIC, RevisionKind.DELETE)


def test_pbenign_handle_clause(cup_pt, e1_e4):
    r = pbenign(cup_pt, HANDLE_CLAUSE, e1_e4)
    assert r.kind is RevisionKind.DISABLE and r.disabling == {1}
    report = patch_mod.obstruction(cup_pt, HANDLE_CLAUSE, e1_e4)
    assert report.protected >= {2, 3}


def test_pbenign_e5(cup_pt, e5):
    assert isinstance(pbenign(cup_pt, CERAMIC, e5), Unrepairable)
    assert isinstance(pbenign(cup_pt, HANDLE_CLAUSE, e5), Unrepairable)


def test_ppatch_cup(cup_pt, e1_e4):
    result = ppatch(cup_pt, e1_e4)
    assert isinstance(result, Repaired)
    kinds = {r.target: r for r in result.revisions}
    assert kinds[CERAMIC].kind is RevisionKind.DELETE
    assert kinds[HANDLE_CLAUSE].disabling == {1}
    assert all(classify(result.theory, le.example) == le.label for le in e1_e4)
    assert verify_patch(cup_pt, result.revisions, e1_e4).passed


def test_ppatch_e5(cup_pt, e5):
    assert isinstance(ppatch(cup_pt, e5), Unrepairable)
    assert isinstance(oracle_patch(cup_pt, e5), Unrepairable)


def test_oracle_cup(cup_pt, e1_e4):
    result = oracle_patch(cup_pt, e1_e4)
    assert result.repaired
    assert all(classify(result.theory, le.example) == le.label for le in e1_e4)


def test_nothing_open_and_consistent(cup, e1_e4):
    es = [LabeledExample(le.example, classify(cup, le.example)) for le in e1_e4]
    result = ppatch(PatchableTheory(cup), es)
    assert result == Repaired((), cup)
    assert verify_patch(PatchableTheory(cup), [], es).passed


def test_nothing_open_and_wrong(cup, e1_e4):
    result = ppatch(PatchableTheory(cup), e1_e4)
    assert isinstance(result, Unrepairable) and result.examples == (0, 1)


def test_delete_handle_clause_alone_fails(cup_pt, e1_e4):
    es = e1_e4[1:]
    report = verify_patch(cup_pt, [Revision(HANDLE_CLAUSE, RevisionKind.DELETE)], es)
    assert report.misclassified == (1, 2)
    assert not report.passed


def test_two_literal_conflict_deletion_only():
    t = parse_theory("root r.\nr :- s.\ns :- a, b.")
    pt = PatchableTheory(t, {LitId("s", 0, 0), LitId("s", 0, 1)}, Policy.DELETION_ONLY)
    es = parse_examples("- a\n- b\n+\n")
    assert isinstance(oracle_patch(pt, es), Unrepairable)


def test_ppatch_requires_unrestricted(cup):
    with pytest.raises(PreconditionError):
        ppatch(PatchableTheory(cup, {CERAMIC}, Policy.DELETION_ONLY), [])


def test_conflicting_duplicate_examples(cup_pt, e1_e4):
    es = [e1_e4[0], LabeledExample(e1_e4[0].example, False)]
    assert ppatch(cup_pt, es).reason == "identical examples with opposite labels"


def test_literal_cannot_be_disabled():
    with pytest.raises(PreconditionError):
        Revision(CERAMIC, RevisionKind.DISABLE, {0})


def test_synthesized_text(cup, e1_e4):
    r = Revision(HANDLE_CLAUSE, RevisionKind.DISABLE, {1})
    texts = synthesized_clauses(cup, r, e1_e4)
    assert texts[0] == "graspable :- has_handle, not _aux_c_graspable_0_0."
    assert texts[1].startswith("_aux_c_graspable_0_0 :- ceramic, not dry, has_bottom")
    t = synthesize(cup, r, e1_e4)
    assert [classify(t, le.example) for le in e1_e4] == [False, False, True, True]


def test_prop_disable_synthesis(cup, e1_e4):
    r = Revision(PropId("graspable"), RevisionKind.DISABLE, {0})
    t = synthesize(cup, r, e1_e4)
    assert classify(t, e1_e4[0].example) is True
    assert fresh_aux_name(t, PropId("graspable")) == "_aux_p_graspable_1"


def test_disable_all_and_none(cup, e1_e4):
    all_ = synthesize(cup, Revision(HANDLE_CLAUSE, RevisionKind.DISABLE, set(range(4))), e1_e4)
    deleted = synthesize(cup, Revision(HANDLE_CLAUSE, RevisionKind.DELETE), e1_e4)
    none = synthesize(cup, Revision(HANDLE_CLAUSE, RevisionKind.DISABLE, set()), e1_e4)
    for le in e1_e4:
        assert classify(all_, le.example) == classify(deleted, le.example)
        assert classify(none, le.example) == classify(cup, le.example)


def test_greedy_gap_fixture():
    """Committing to one literal revision at a time can miss a repair.

    Here every open component is parity-definite, the exhaustive search finds a
    repair, and the greedy loop keeps l:p1/0/0 (no example forces either
    choice yet) which later leaves l:r/1/1 needing both revisions.
    """
    t = parse_theory(fixture_text("greedy_gap.th"))
    pt = PatchableTheory(t, parse_open(fixture_text("greedy_gap.open")))
    es = parse_examples(fixture_text("greedy_gap.ex"))
    ref = oracle_patch(pt, es)
    assert ref.repaired
    assert all(classify(ref.theory, le.example) == le.label for le in es)
    ours = ppatch(pt, es)
    assert isinstance(ours, Unrepairable)
    assert ours.component == LitId("r", 1, 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_repaired_is_sound_and_verifies(seed):
    rng = random.Random(seed)
    pt = random_patchable(rng)
    es = random_examples(rng, pt, 8)
    result = ppatch(pt, es)
    if result.repaired:
        assert all(classify(result.theory, le.example) == le.label for le in es)
        assert verify_patch(pt, result.revisions, es).passed


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_synthesis_matches_disabling(seed):
    rng = random.Random(seed)
    pt = random_patchable(rng)
    es = random_examples(rng, pt, 6)
    others = [c for c in pt.ordered_open if not isinstance(c, LitId)]
    if not others:
        return
    c = rng.choice(others)
    d = frozenset(i for i in range(len(es)) if rng.random() < 0.5)
    t = synthesize(pt.theory, Revision(c, RevisionKind.DISABLE, d), es)
    for i, le in enumerate(es):
        assert classify(t, le.example) == classify_view(pt.theory, le.example, [c] if i in d else [])


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_each_step_is_benign(seed):
    rng = random.Random(seed)
    pt = random_patchable(rng, max_open=4)
    es = random_examples(rng, pt, 6, consistent=True)
    result = ppatch(pt, es)
    if not result.repaired:
        return
    current = pt
    for r in result.revisions:
        theory = synthesize(current.theory, r, es)
        rest = {o for o in current.open - {r.target} if theory.resolves(o)}
        current = PatchableTheory(theory, rest)
        assert oracle_patch(current, es).repaired


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_clause_prop_order_robustness(seed):
    rng = random.Random(seed)
    pt = random_patchable(rng, max_open=5)
    es = random_examples(rng, pt, 6)
    base = ppatch(pt, es).repaired
    lits = [c for c in pt.ordered_open if isinstance(c, LitId)]
    others = [c for c in pt.ordered_open if not isinstance(c, LitId)]
    original = patch_mod._ordered
    try:
        for perm in list(permutations(others))[:6]:
            patch_mod._ordered = lambda ids, perm=perm: lits + list(perm)
            assert ppatch(pt, es).repaired == base
    finally:
        patch_mod._ordered = original


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_complete_without_open_literals(seed):
    rng = random.Random(seed)
    pt = random_patchable(rng)
    pt = PatchableTheory(pt.theory, {c for c in pt.open if not isinstance(c, LitId)})
    es = random_examples(rng, pt, 8)
    assert ppatch(pt, es).repaired == oracle_patch(pt, es).repaired
