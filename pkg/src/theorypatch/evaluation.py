"""Coverage of examples under negation as failure, with per-example disabling."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from collections.abc import Set as AbstractSet

from .errors import TheoryError
from .theory import ClauseId, ComponentId, Example, LitId, PropId, Theory


class AllExamples(AbstractSet[int]):
    """Disabling set containing every example (a deletion)."""

    def __contains__(self, item) -> bool:
        return True

    def __iter__(self):
        raise TypeError("ALL is not enumerable")

    def __len__(self) -> int:
        raise TypeError("ALL has no length")

    def __repr__(self) -> str:
        return "ALL"

    def __eq__(self, other) -> bool:
        return isinstance(other, AllExamples)

    def __hash__(self) -> int:
        return hash(AllExamples)


ALL = AllExamples()
NONE: frozenset[int] = frozenset()

DisablingMap = Mapping[ComponentId, AbstractSet[int]]


def _prove(t: Theory, true: AbstractSet[str], forced: AbstractSet[str],
           off_clauses: AbstractSet[int], true_lits: AbstractSet[tuple[int, int]]) -> bool:
    by_head: dict[str, list[int]] = {}
    for i, clause in enumerate(t.clauses):
        if not clause.deleted and i not in off_clauses:
            by_head.setdefault(clause.head, []).append(i)

    memo: dict[str, bool] = {}

    def value(p: str) -> bool:
        if p in memo:
            return memo[p]
        if p in forced:
            result = True
        elif p in t.primitives:
            result = p in true
        else:
            result = any(body_holds(i) for i in by_head.get(p, ()))
        memo[p] = result
        return result

    def body_holds(i: int) -> bool:
        for j, lit in enumerate(t.clauses[i].body):
            if lit.deleted or (i, j) in true_lits:
                continue
            if value(lit.prop) != lit.positive:
                return False
        return True

    return value(t.root)


def classify(t: Theory, e: Example) -> bool:
    return _prove(t, e.true, (), (), ())


def classify_disabled(t: Theory, open_ids: Iterable[ComponentId], e: Example, eidx: int,
                      d: DisablingMap) -> bool:
    """Classify ``e`` (the ``eidx``-th example) with components in ``d`` disabled for it.

    A disabled clause cannot be used, a disabled proposition is true and a
    disabled literal is treated as deleted.
    """
    open_ids = set(open_ids)
    forced, off, true_lits = set(), set(), set()
    for c, disabled in d.items():
        if c not in open_ids:
            raise TheoryError(f"{c} is not an open component")
        if isinstance(c, LitId) and not (disabled == ALL or not disabled):
            raise TheoryError(f"literal {c} only admits deletion or the null revision")
        if eidx not in disabled:
            continue
        if isinstance(c, PropId):
            forced.add(c.name)
        elif isinstance(c, ClauseId):
            off.add(t.clause_position(c))
        else:
            true_lits.add((t.clause_position(c.clause), c.j))
    return _prove(t, e.true, forced, off, true_lits)


def classify_view(t: Theory, e: Example, disabled: Iterable[ComponentId]) -> bool:
    """Classify ``e`` with every component in ``disabled`` switched off for it."""
    forced, off, true_lits = set(), set(), set()
    for c in disabled:
        if isinstance(c, PropId):
            forced.add(c.name)
        elif isinstance(c, ClauseId):
            off.add(t.clause_position(c))
        else:
            true_lits.add((t.clause_position(c.clause), c.j))
    return _prove(t, e.true, forced, off, true_lits)
