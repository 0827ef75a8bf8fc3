"""Generators for the SAT hardness constructions, plus a brute-force SAT check.

Naming in the propositional construction: root ``r``, one proposition ``d<i>``
per CNF clause (1-based), one proposition per variable named after it, and a
primitive ``prim_<var>`` feeding it through the single open literal of the
clause ``<var> :- prim_<var>.``
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from itertools import product

from .errors import BudgetExceeded, ParseError, PreconditionError, TheoryError
from .firstorder import Atom, FOClause, FOLabeledExample, FOLiteral, FOTheory, Var
from .theory import (
    Clause,
    Example,
    LabeledExample,
    Literal,
    LitId,
    PatchableTheory,
    Policy,
    Theory,
)

PRIMITIVE_PREFIX = "prim_"
SAT_ORACLE_BUDGET = 20


@dataclass(frozen=True)
class CNF:
    variables: tuple[str, ...]
    clauses: tuple[tuple[tuple[str, bool], ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        unknown = {v for c in self.clauses for v, _ in c} - set(self.variables)
        if unknown:
            raise TheoryError(f"clauses mention undeclared variables {sorted(unknown)}")

    @classmethod
    def from_ints(cls, clauses: Sequence[Sequence[int]], n_vars: int | None = None) -> CNF:
        n = max((abs(x) for c in clauses for x in c), default=0) if n_vars is None else n_vars
        return cls(
            tuple(f"v{i}" for i in range(1, n + 1)),
            tuple(tuple((f"v{abs(x)}", x > 0) for x in c) for c in clauses),
        )

    @property
    def monotone(self) -> bool:
        return all(len({sign for _, sign in c}) <= 1 for c in self.clauses)

    def satisfied_by(self, assignment: Mapping[str, bool]) -> bool:
        return all(any(assignment[v] == sign for v, sign in c) for c in self.clauses)

    def deduplicated(self) -> CNF:
        """Drop repeated literals inside a clause, keeping first occurrences."""
        return CNF(self.variables, tuple(tuple(dict.fromkeys(c)) for c in self.clauses))


def parse_dimacs(text: str) -> CNF:
    n_vars = None
    numbers: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("c", "%")):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad problem line {line!r}", lineno)
            n_vars = int(parts[2])
            continue
        try:
            numbers += [int(x) for x in line.split()]
        except ValueError:
            raise ParseError(f"bad clause line {line!r}", lineno) from None
    if n_vars is None:
        raise ParseError("missing 'p cnf' header", 1)
    clauses, cur = [], []
    for x in numbers:
        if x == 0:
            clauses.append(cur)
            cur = []
        else:
            if abs(x) > n_vars:
                raise TheoryError(f"literal {x} exceeds declared variable count {n_vars}")
            cur.append(x)
    if cur:
        clauses.append(cur)
    return CNF.from_ints(clauses, n_vars)


def write_dimacs(s: CNF) -> str:
    index = {v: i for i, v in enumerate(s.variables, 1)}
    lines = [f"p cnf {len(s.variables)} {len(s.clauses)}"]
    for c in s.clauses:
        lines.append(" ".join(str(index[v] if sign else -index[v]) for v, sign in c) + " 0")
    return "\n".join(lines) + "\n"


def cnf_sat_oracle(s: CNF, budget: int = SAT_ORACLE_BUDGET) -> dict[str, bool] | None:
    """First satisfying assignment in lexicographic order (F before T), or None."""
    if len(s.variables) > budget:
        raise BudgetExceeded(f"{len(s.variables)} variables exceed the budget of {budget}")
    for values in product((False, True), repeat=len(s.variables)):
        assignment = dict(zip(s.variables, values))
        if s.satisfied_by(assignment):
            return assignment
    return None


# --------------------------------------------------------------------------
# propositional construction


def _occurring(s: CNF) -> list[str]:
    return list(dict.fromkeys(v for c in s.clauses for v, _ in c))


def variable_literal(v: str) -> LitId:
    return LitId(v, 0, 0)


def sat_to_ppatch(s: CNF) -> tuple[PatchableTheory, LabeledExample]:
    if not s.clauses:
        raise PreconditionError("the construction needs at least one clause")
    s = s.deduplicated()
    ds = [f"d{i}" for i in range(1, len(s.clauses) + 1)]
    taken = set(ds) | {"r"}
    for v in s.variables:
        if v in taken or v.startswith(PRIMITIVE_PREFIX):
            raise PreconditionError(f"variable name {v!r} clashes with generated names")
    clauses = [Clause("r", tuple(Literal(d) for d in ds))]
    for d, c in zip(ds, s.clauses):
        clauses += [Clause(d, (Literal(v, sign),)) for v, sign in c]
    variables = _occurring(s)
    clauses += [Clause(v, (Literal(PRIMITIVE_PREFIX + v),)) for v in variables]
    theory = Theory("r", tuple(clauses), frozenset(PRIMITIVE_PREFIX + v for v in variables))
    pt = PatchableTheory(theory, {variable_literal(v) for v in variables}, Policy.DELETION_ONLY)
    return pt, LabeledExample(Example(), True)


def assignment_to_deletions(s: CNF, assignment: Mapping[str, bool]) -> frozenset[LitId]:
    """A variable is true exactly when the open literal under it is deleted."""
    return frozenset(variable_literal(v) for v in _occurring(s) if assignment[v])


def deletions_to_assignment(s: CNF, deletions) -> dict[str, bool]:
    return {v: variable_literal(v) in deletions for v in s.variables}


def assignment_revisions_roundtrip(s: CNF, x):
    """Map an assignment to its deletion set, or a deletion set to its assignment."""
    if isinstance(x, Mapping):
        return assignment_to_deletions(s, x)
    return deletions_to_assignment(s, x)


# --------------------------------------------------------------------------
# first-order constructions from monotone CNF


def _require_monotone(a: CNF) -> None:
    if not a.monotone:
        raise PreconditionError("construction needs a monotone CNF (each clause all-positive or all-negative)")


def _monotone_examples(a: CNF) -> list[FOLabeledExample]:
    index = {v: i for i, v in enumerate(a.variables)}
    out = []
    for c in a.clauses:
        zeros = {index[v] for v, _ in c}
        positive = bool(c) and c[0][1]
        args = ["0" if i in zeros else "1" for i in range(len(a.variables))]
        # positive conjunct: negative example with w = 0; negative conjunct: positive, w = 1
        args.append("0" if positive else "1")
        out.append(FOLabeledExample(tuple(args), not positive))
    return out


def monotone_lit(i: int) -> LitId:
    """Open literal of the clause defining ``q<i>`` (1-based)."""
    return LitId(f"q{i}", 0, 0)


def monotone_assignment_to_deletions(a: CNF, assignment: Mapping[str, bool]) -> frozenset[LitId]:
    """A variable is false exactly when the literal under its ``q`` clause is deleted."""
    return frozenset(monotone_lit(i) for i, v in enumerate(a.variables, 1) if not assignment[v])


def monotone_deletions_to_assignment(a: CNF, deletions) -> dict[str, bool]:
    return {v: monotone_lit(i) not in deletions for i, v in enumerate(a.variables, 1)}


def monotone_sat_to_fpatch_ground(a: CNF) -> tuple[PatchableTheory, list[FOLabeledExample]]:
    """Negation-free, completely bound, ground-fact construction (not quasi-propositional)."""
    _require_monotone(a)
    n = len(a.variables)
    xs = tuple(Var(f"X{i}") for i in range(1, n + 1))
    vec = xs + (Var("W"),)
    head = lambda p: Atom(p, vec)
    pos = lambda p, *args: FOLiteral(Atom(p, args))
    clauses = [
        FOClause(head("r"), (FOLiteral(head("s")), FOLiteral(head("t")))),
        FOClause(head("s"), (pos("zero", Var("W")),)),
    ]
    clauses += [FOClause(head("s"), (pos(f"q{i}", x), pos("zero", x))) for i, x in enumerate(xs, 1)]
    clauses.append(FOClause(head("t"), (pos("one", Var("W")),)))
    clauses.append(FOClause(head("t"), tuple(pos(f"q{i}", x) for i, x in enumerate(xs, 1))))
    clauses += [FOClause(Atom(f"q{i}", (Var("X"),)), (pos("one", Var("X")),)) for i in range(1, n + 1)]
    theory = FOTheory(
        "r", n + 1, tuple(clauses), (Atom("zero", ("0",)), Atom("one", ("1",))), frozenset({"zero", "one"})
    )
    opens = {monotone_lit(i) for i in range(1, n + 1)}
    return PatchableTheory(theory, opens, Policy.DELETION_ONLY), _monotone_examples(a)


def monotone_sat_to_fpatch_qp(a: CNF) -> tuple[PatchableTheory, list[FOLabeledExample]]:
    """Negation-free, quasi-propositional construction with non-ground facts."""
    _require_monotone(a)
    n = len(a.variables)
    vec = tuple(Var(f"X{i}") for i in range(1, n + 1)) + (Var("W"),)
    lit = lambda p: FOLiteral(Atom(p, vec))
    clauses = [
        FOClause(Atom("r", vec), (lit("s"), lit("t"))),
        FOClause(Atom("s", vec), (lit("zero_w"),)),
    ]
    clauses += [FOClause(Atom("s", vec), (lit(f"q{i}"), lit(f"zero_{i}"))) for i in range(1, n + 1)]
    clauses.append(FOClause(Atom("t", vec), (lit("one_w"),)))
    clauses.append(FOClause(Atom("t", vec), tuple(lit(f"q{i}") for i in range(1, n + 1))))
    clauses += [FOClause(Atom(f"q{i}", vec), (lit(f"one_{i}"),)) for i in range(1, n + 1)]

    def pinned(name: str, position: int, value: str) -> Atom:
        return Atom(name, tuple(value if k == position else v for k, v in enumerate(vec)))

    facts = []
    for i in range(1, n + 1):
        facts.append(pinned(f"zero_{i}", i - 1, "0"))
    facts.append(pinned("zero_w", n, "0"))
    for i in range(1, n + 1):
        facts.append(pinned(f"one_{i}", i - 1, "1"))
    facts.append(pinned("one_w", n, "1"))
    theory = FOTheory("r", n + 1, tuple(clauses), tuple(facts), frozenset(f.pred for f in facts))
    opens = {monotone_lit(i) for i in range(1, n + 1)}
    return PatchableTheory(theory, opens, Policy.DELETION_ONLY), _monotone_examples(a)
