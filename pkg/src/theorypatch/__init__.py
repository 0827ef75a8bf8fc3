"""Patch propositional and first-order domain theories against labeled examples."""

from .errors import (
    BudgetExceeded,
    CycleError,
    FreshNameCollision,
    NotParityDefinite,
    ParseError,
    PreconditionError,
    TheoryError,
    UnresolvedComponent,
)
from .evaluation import ALL, NONE, classify, classify_disabled, classify_view
from .parity import Parity, compute_parity, is_parity_definite
from .patch import (
    Repaired,
    Revision,
    RevisionKind,
    Unrepairable,
    oracle_patch,
    pbenign,
    ppatch,
    synthesize,
    verify_patch,
)
from .stability import Verdict, gamma_gen, gamma_spec, oracle_stable, pstable
from .theory import (
    Clause,
    ClauseId,
    Example,
    LabeledExample,
    Literal,
    LitId,
    PatchableTheory,
    Policy,
    PropId,
    Theory,
    parse_examples,
    parse_open,
    parse_theory,
    serialize_theory,
)

__all__ = [
    "ALL",
    "NONE",
    "BudgetExceeded",
    "Clause",
    "ClauseId",
    "CycleError",
    "Example",
    "FreshNameCollision",
    "LabeledExample",
    "LitId",
    "Literal",
    "NotParityDefinite",
    "Parity",
    "ParseError",
    "PatchableTheory",
    "Policy",
    "PreconditionError",
    "PropId",
    "Repaired",
    "Revision",
    "RevisionKind",
    "Theory",
    "TheoryError",
    "Unrepairable",
    "UnresolvedComponent",
    "Verdict",
    "classify",
    "classify_disabled",
    "classify_view",
    "compute_parity",
    "gamma_gen",
    "gamma_spec",
    "is_parity_definite",
    "oracle_patch",
    "oracle_stable",
    "parse_examples",
    "parse_open",
    "parse_theory",
    "pbenign",
    "ppatch",
    "pstable",
    "serialize_theory",
    "synthesize",
    "verify_patch",
]
