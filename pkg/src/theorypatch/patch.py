"""Patching a theory against labeled examples.

``ppatch`` closes the open components one at a time, each time choosing a
revision that keeps the remaining patchable theory repairable.  The choice is
driven by two example sets computed with ``pstable``: the obstructive examples
(misclassified whatever happens elsewhere unless this component is disabled)
and the protected ones (misclassified whatever happens elsewhere if it is).
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from itertools import combinations

from .errors import (
    BudgetExceeded,
    FreshNameCollision,
    NotParityDefinite,
    PreconditionError,
)
from .evaluation import classify, classify_view
from .parity import compute_parity, is_parity_definite
from .stability import Verdict, pstable
from .theory import (
    Clause,
    ClauseId,
    ComponentId,
    LabeledExample,
    Literal,
    LitId,
    PatchableTheory,
    Policy,
    PropId,
    Theory,
    component_sort_key,
    delete_component,
    delete_components,
)

AUX_PREFIX = "_aux_"


class RevisionKind(enum.Enum):
    DELETE = "delete"
    NULL = "null"
    DISABLE = "disable"


@dataclass(frozen=True)
class Revision:
    target: ComponentId
    kind: RevisionKind
    disabling: frozenset[int] = frozenset()
    synthesized: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "disabling", frozenset(self.disabling))
        if isinstance(self.target, LitId) and self.kind is RevisionKind.DISABLE:
            raise PreconditionError(f"literal {self.target} only admits deletion or null")
        if self.kind is not RevisionKind.DISABLE and self.disabling:
            raise PreconditionError("only a disable revision carries a disabling set")

    def disabled_for(self, n_examples: int) -> frozenset[int]:
        if self.kind is RevisionKind.DELETE:
            return frozenset(range(n_examples))
        return self.disabling


@dataclass(frozen=True)
class ObstructionReport:
    obstructive: frozenset[int]
    protected: frozenset[int]


@dataclass(frozen=True)
class Repaired:
    revisions: tuple[Revision, ...]
    theory: Theory

    repaired = True


@dataclass(frozen=True)
class Unrepairable:
    component: ComponentId | None
    examples: tuple[int, ...]
    reason: str = ""

    repaired = False


PatchResult = Repaired | Unrepairable


def _ordered(ids) -> list[ComponentId]:
    rank = {LitId: 0, ClauseId: 1, PropId: 2}
    return sorted(ids, key=lambda c: (rank[type(c)], component_sort_key(c)))


def _label_conflict(es: Sequence[LabeledExample]) -> Unrepairable | None:
    seen: dict = {}
    for i, le in enumerate(es):
        j = seen.setdefault(le.example, i)
        if es[j].label != le.label:
            return Unrepairable(None, (j, i), "identical examples with opposite labels")
    return None


def _without(pt: PatchableTheory, c: ComponentId) -> tuple[PatchableTheory, PatchableTheory]:
    """``<Γ, Ω∖{c}>`` and ``<Γ∖{c}, Ω∖{c}>``."""
    rest = pt.open - {c}
    deleted = delete_component(pt.theory, c)
    return (
        PatchableTheory(pt.theory, rest, pt.policy),
        PatchableTheory(deleted, {o for o in rest if deleted.resolves(o)}, pt.policy),
    )


def obstruction(pt: PatchableTheory, c: ComponentId, es: Sequence[LabeledExample],
                parity=None) -> ObstructionReport:
    kept, dropped = _without(pt, c)
    obstructive, protected = set(), set()
    for i, le in enumerate(es):
        wrong = Verdict.of(not le.label)
        if pstable(kept, le.example, parity) is wrong:
            obstructive.add(i)
        if pstable(dropped, le.example, parity) is wrong:
            protected.add(i)
    return ObstructionReport(frozenset(obstructive), frozenset(protected))


def _require_patchable(pt: PatchableTheory, parity) -> dict:
    if pt.policy is not Policy.UNRESTRICTED:
        raise PreconditionError("greedy patching needs the unrestricted revision policy")
    parity = compute_parity(pt.theory) if parity is None else parity
    check = is_parity_definite(pt, parity)
    if not check.definite:
        raise NotParityDefinite(check.undefined)
    return parity


def pbenign(pt: PatchableTheory, c: ComponentId, es: Sequence[LabeledExample],
            parity=None) -> Revision | Unrepairable:
    if c not in pt.open:
        raise PreconditionError(f"{c} is not open")
    parity = _require_patchable(pt, parity)
    report = obstruction(pt, c, es, parity)
    o, p = report.obstructive, report.protected
    if o & p:
        return Unrepairable(c, (min(o & p),), "example stably misclassified")
    if isinstance(c, LitId):
        # O = P = ∅ admits both; keep the literal
        if not o:
            return Revision(c, RevisionKind.NULL)
        if not p:
            return Revision(c, RevisionKind.DELETE)
        return Unrepairable(c, (min(o), min(p)), "literal must be both deleted and kept")
    if not o:
        return Revision(c, RevisionKind.NULL)
    return Revision(c, RevisionKind.DISABLE, o)


# --------------------------------------------------------------------------
# syntactic revisions


def _slug(c: ComponentId) -> str:
    if isinstance(c, PropId):
        return f"p_{c.name}"
    if isinstance(c, ClauseId):
        return f"c_{c.head}_{c.k}"
    return f"l_{c.head}_{c.k}_{c.j}"


def fresh_aux_name(t: Theory, c: ComponentId) -> str:
    stem = f"{AUX_PREFIX}{_slug(c)}_"
    n = sum(1 for p in t.propositions if p.startswith(stem) and p[len(stem):].isdigit())
    name = f"{stem}{n}"
    if name in t.propositions:
        raise FreshNameCollision(f"{name} already occurs in the theory")
    return name


def example_conjunction(t: Theory, true) -> tuple[Literal, ...]:
    return tuple(Literal(p, p in true) for p in sorted(t.primitives))


def _apply(t: Theory, r: Revision, es: Sequence[LabeledExample]) -> tuple[Theory, tuple[Clause, ...]]:
    if r.kind is RevisionKind.NULL:
        return t, ()
    if r.kind is RevisionKind.DELETE:
        return delete_component(t, r.target), ()
    if isinstance(r.target, LitId):
        raise PreconditionError(f"literal {r.target} only admits deletion or null")
    for i in r.disabling:
        if not 0 <= i < len(es):
            raise PreconditionError(f"disabling example index {i} out of range")
    t.resolve(r.target)
    q = fresh_aux_name(t, r.target)
    aux = tuple(Clause(q, example_conjunction(t, es[i].example.true)) for i in sorted(r.disabling))
    clauses = list(t.clauses)
    if isinstance(r.target, ClauseId):
        pos = t.clause_position(r.target)
        old = clauses[pos]
        clauses[pos] = replace(old, body=old.body + (Literal(q, positive=False),))
        added = (clauses[pos],) + aux
    else:
        added = (Clause(r.target.name, (Literal(q),)),) + aux
        clauses.extend(added[:1])
    clauses.extend(aux)
    return Theory(t.root, tuple(clauses), t.primitives), added


def synthesize(t: Theory, r: Revision, es: Sequence[LabeledExample]) -> Theory:
    """Realize ``r`` as an edit of ``t``.

    A disable revision on a clause appends ``not q`` to its body; on a
    proposition ``p`` it appends ``p :- q``.  The fresh proposition ``q`` gets
    one clause per disabled example whose body pins every primitive to that
    example's value, so ``q`` holds on exactly the disabled examples.
    """
    return _apply(t, r, es)[0]


def synthesized_clauses(t: Theory, r: Revision, es: Sequence[LabeledExample]) -> tuple[str, ...]:
    return tuple(str(c) for c in _apply(t, r, es)[1])


# --------------------------------------------------------------------------
# the patching loop


def misclassified(t: Theory, es: Sequence[LabeledExample]) -> tuple[int, ...]:
    return tuple(i for i, le in enumerate(es) if classify(t, le.example) != le.label)


def ppatch(pt: PatchableTheory, es: Sequence[LabeledExample]) -> PatchResult:
    parity = _require_patchable(pt, None)
    conflict = _label_conflict(es)
    if conflict:
        return conflict
    current = pt
    revisions = []
    for c in _ordered(pt.open):
        r = pbenign(current, c, es, parity)
        if isinstance(r, Unrepairable):
            return r
        theory, added = _apply(current.theory, r, es)
        revisions.append(replace(r, synthesized=tuple(map(str, added))))
        rest = {o for o in current.open - {c} if theory.resolves(o)}
        current = PatchableTheory(theory, rest, pt.policy)
    wrong = misclassified(current.theory, es)
    if wrong and not pt.open:
        return Unrepairable(None, wrong, "no open components and examples misclassified")
    if wrong:
        raise RuntimeError(f"patching loop finished with misclassified examples {wrong}")
    return Repaired(tuple(revisions), current.theory)


# --------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class ComponentCheck:
    component: ComponentId
    obstructive: frozenset[int]
    protected: frozenset[int]
    disabling: frozenset[int]

    @property
    def covers_obstructive(self) -> bool:
        return self.obstructive <= self.disabling

    @property
    def spares_protected(self) -> bool:
        return not (self.protected & self.disabling)

    @property
    def passed(self) -> bool:
        return self.covers_obstructive and self.spares_protected


@dataclass(frozen=True)
class VerifyReport:
    misclassified: tuple[int, ...]
    components: tuple[ComponentCheck, ...] = field(default=())

    @property
    def classification_ok(self) -> bool:
        return not self.misclassified

    @property
    def passed(self) -> bool:
        return self.classification_ok and all(c.passed for c in self.components)


def verify_patch(pt: PatchableTheory, revisions: Sequence[Revision],
                 es: Sequence[LabeledExample]) -> VerifyReport:
    """Replay ``revisions`` and check the soundness conditions.

    For the last revision of each component, its disabling set must contain
    every obstructive example and no protected example, both computed on the
    state just before that revision.
    """
    parity = compute_parity(pt.theory)
    check = is_parity_definite(pt, parity)
    if not check.definite:
        raise NotParityDefinite(check.undefined)
    for r in revisions:
        if r.target not in pt.open:
            raise PreconditionError(f"revision targets closed component {r.target}")
    last = {r.target: i for i, r in enumerate(revisions)}
    current = pt
    checks = []
    for i, r in enumerate(revisions):
        if last[r.target] == i:
            report = obstruction(current, r.target, es, parity)
            checks.append(ComponentCheck(r.target, report.obstructive, report.protected,
                                         r.disabled_for(len(es))))
            rest = current.open - {r.target}
        else:
            rest = current.open
        theory = synthesize(current.theory, r, es)
        current = PatchableTheory(theory, {o for o in rest if theory.resolves(o)}, pt.policy)
    return VerifyReport(misclassified(current.theory, es), tuple(checks))


# --------------------------------------------------------------------------
# exhaustive reference


ORACLE_OPEN_BUDGET = 8
ORACLE_EXAMPLE_BUDGET = 12
ORACLE_DELETION_BUDGET = 20


def _subsets(items):
    for size in range(len(items) + 1):
        yield from combinations(items, size)


def oracle_patch(pt: PatchableTheory, es: Sequence[LabeledExample],
                 open_budget: int | None = None, example_budget: int | None = None) -> PatchResult:
    """Search every obtainable classification of the training set.

    Under the unrestricted policy a clause or proposition may be disabled for
    any subset of the examples, and the disabling decision for one example
    does not affect another.  The joint search therefore factors: for each
    choice of literal deletions, every example independently needs some
    disabling pattern over the remaining open components.
    """
    open_ids = _ordered(pt.open)
    if pt.policy is Policy.DELETION_ONLY:
        limit = ORACLE_DELETION_BUDGET if open_budget is None else open_budget
        if len(open_ids) > limit:
            raise BudgetExceeded(f"{len(open_ids)} open components exceed the budget of {limit}")
        for deleted in _subsets(open_ids):
            if all(classify_view(pt.theory, le.example, deleted) == le.label for le in es):
                revisions = tuple(
                    Revision(c, RevisionKind.DELETE if c in deleted else RevisionKind.NULL)
                    for c in open_ids
                )
                return Repaired(revisions, delete_components(pt.theory, deleted))
        return Unrepairable(None, (), "no deletion set classifies every example")

    open_limit = ORACLE_OPEN_BUDGET if open_budget is None else open_budget
    ex_limit = ORACLE_EXAMPLE_BUDGET if example_budget is None else example_budget
    if len(open_ids) > open_limit or len(es) > ex_limit:
        raise BudgetExceeded(
            f"{len(open_ids)} open components / {len(es)} examples exceed {open_limit}/{ex_limit}"
        )
    conflict = _label_conflict(es)
    if conflict:
        return conflict
    lits = [c for c in open_ids if isinstance(c, LitId)]
    others = [c for c in open_ids if not isinstance(c, LitId)]
    patterns = list(_subsets(others))
    for deleted in _subsets(lits):
        chosen = []
        for le in es:
            hit = next(
                (p for p in patterns if classify_view(pt.theory, le.example, deleted + p) == le.label),
                None,
            )
            if hit is None:
                break
            chosen.append(set(hit))
        else:
            revisions = []
            theory = pt.theory
            for c in open_ids:
                if isinstance(c, LitId):
                    r = Revision(c, RevisionKind.DELETE if c in deleted else RevisionKind.NULL)
                else:
                    d = frozenset(i for i, p in enumerate(chosen) if c in p)
                    r = Revision(c, RevisionKind.DISABLE, d) if d else Revision(c, RevisionKind.NULL)
                theory, added = _apply(theory, r, es)
                revisions.append(replace(r, synthesized=tuple(map(str, added))))
            return Repaired(tuple(revisions), theory)
    return Unrepairable(None, (), "no obtainable theory classifies every example")
