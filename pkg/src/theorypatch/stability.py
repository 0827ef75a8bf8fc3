"""Example stability: is an example classified the same by every obtainable theory?"""

from __future__ import annotations

import enum
from itertools import combinations

from .errors import BudgetExceeded, NotParityDefinite
from .evaluation import classify, classify_view
from .parity import Parity, compute_parity, is_parity_definite
from .theory import Example, PatchableTheory, Theory, delete_components

DEFAULT_BUDGET = 16


class Verdict(enum.Enum):
    T = "T"  # stably covered
    F = "F"  # stably uncovered
    U = "U"  # unstable

    @classmethod
    def of(cls, covered: bool) -> Verdict:
        return cls.T if covered else cls.F


def _open_with_parity(pt: PatchableTheory, parity, wanted: Parity):
    if parity is None:
        parity = compute_parity(pt.theory)
    check = is_parity_definite(pt, parity)
    if not check.definite:
        raise NotParityDefinite(check.undefined)
    return [c for c in pt.open if parity[c] is wanted]


def gamma_gen(pt: PatchableTheory, parity=None) -> Theory:
    """Maximal generalization: every open even component deleted.

    ``parity`` may carry a parity map computed on an ancestor theory; the
    patching loop uses this so that components orphaned by earlier edits keep
    the parity they had when the loop started.
    """
    return delete_components(pt.theory, _open_with_parity(pt, parity, Parity.EVEN))


def gamma_spec(pt: PatchableTheory, parity=None) -> Theory:
    """Maximal specialization: every open odd component deleted."""
    return delete_components(pt.theory, _open_with_parity(pt, parity, Parity.ODD))


def pstable(pt: PatchableTheory, e: Example, parity=None) -> Verdict:
    gen = classify(gamma_gen(pt, parity), e)
    spec = classify(gamma_spec(pt, parity), e)
    if gen and spec:
        return Verdict.T
    if not gen and not spec:
        return Verdict.F
    return Verdict.U


def oracle_stable(pt: PatchableTheory, e: Example, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Decide stability by trying every per-example disabling pattern."""
    open_ids = pt.ordered_open
    if len(open_ids) > budget:
        raise BudgetExceeded(f"{len(open_ids)} open components exceed the budget of {budget}")
    seen = set()
    for size in range(len(open_ids) + 1):
        for disabled in combinations(open_ids, size):
            seen.add(classify_view(pt.theory, e, disabled))
            if len(seen) == 2:
                return Verdict.U
    return Verdict.of(seen.pop())
