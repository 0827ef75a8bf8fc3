"""Even/odd parity of theory components.

The root is even.  A clause takes the opposite parity of its head and a body
literal the opposite parity of its clause.  An internal proposition is even
(odd) when all its positive occurrences are even (odd) and all its negative
occurrences are odd (even).  Anything else, including components the root
never reaches, is undefined.

Odd components only enable proofs of the root, so disabling them specializes
the theory; even components only block proofs, so disabling them generalizes.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

from .theory import (
    ClauseId,
    ComponentId,
    LitId,
    PatchableTheory,
    PropId,
    Theory,
    component_sort_key,
)


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    UNDEFINED = "undefined"

    def flip(self) -> Parity:
        if self is Parity.EVEN:
            return Parity.ODD
        if self is Parity.ODD:
            return Parity.EVEN
        return Parity.UNDEFINED


def compute_parity(t: Theory) -> dict[ComponentId, Parity]:
    occurrences: dict[str, list[tuple[LitId, bool]]] = {}
    clauses_of: dict[str, list[ClauseId]] = {}
    for cid, clause in t.live_clauses():
        clauses_of.setdefault(cid.head, []).append(cid)
        for j, lit in enumerate(clause.body):
            if not lit.deleted:
                occurrences.setdefault(lit.prop, []).append((LitId(cid.head, cid.k, j), lit.positive))

    parity: dict[ComponentId, Parity] = {}
    for name in t.topological_order:
        if name in t.primitives:
            continue
        if name == t.root:
            p = Parity.EVEN
        else:
            wanted = {
                parity[lid] if positive else parity[lid].flip()
                for lid, positive in occurrences.get(name, ())
            }
            p = wanted.pop() if len(wanted) == 1 else Parity.UNDEFINED
        parity[PropId(name)] = p
        for cid in clauses_of.get(name, ()):
            parity[cid] = p.flip()
            for j, lit in enumerate(t.resolve(cid).body):
                if not lit.deleted:
                    parity[LitId(cid.head, cid.k, j)] = p
    return parity


class ParityCheck(NamedTuple):
    definite: bool
    undefined: tuple


def is_parity_definite(pt: PatchableTheory, parity: dict | None = None) -> ParityCheck:
    parity = compute_parity(pt.theory) if parity is None else parity
    bad = tuple(
        c for c in sorted(pt.open, key=component_sort_key)
        if parity.get(c, Parity.UNDEFINED) is Parity.UNDEFINED
    )
    return ParityCheck(not bad, bad)
