"""Function-free, non-recursive first-order theories and their propositionalization.

Quasi-propositional theories whose facts are all ground reduce to the
propositional case: every literal carries the root's variable vector, so a
predicate can be replaced by a single proposition, and an example fixes the
truth of each fact predicate through the ground facts that match it.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from functools import cached_property
from itertools import product
from typing import NamedTuple

from .errors import NotParityDefinite, ParseError, PreconditionError, TheoryError
from .parity import compute_parity, is_parity_definite
from .patch import AUX_PREFIX, Repaired, RevisionKind, Unrepairable, _slug, ppatch
from .theory import (
    IDENT,
    Clause,
    ClauseId,
    ComponentId,
    Example,
    LabeledExample,
    Literal,
    PatchableTheory,
    PropId,
    Theory,
)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


Term = str | Var


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def variables(self) -> list[Var]:
        return [a for a in self.args if isinstance(a, Var)]

    @property
    def ground(self) -> bool:
        return not self.variables

    def __str__(self) -> str:
        return f"{self.pred}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class FOLiteral:
    atom: Atom
    positive: bool = True
    deleted: bool = False

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"not {self.atom}"


@dataclass(frozen=True)
class FOClause:
    head: Atom
    body: tuple[FOLiteral, ...] = ()
    deleted: bool = False

    @property
    def live_body(self) -> tuple[FOLiteral, ...]:
        return tuple(lit for lit in self.body if not lit.deleted)

    def __str__(self) -> str:
        if not self.live_body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.live_body))}."


@dataclass(frozen=True)
class FOTheory:
    root: str
    arity: int
    clauses: tuple[FOClause, ...] = ()
    facts: tuple[Atom, ...] = ()
    fact_predicates: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        object.__setattr__(self, "facts", tuple(self.facts))
        object.__setattr__(self, "fact_predicates", frozenset(self.fact_predicates))
        for f in self.facts:
            if f.pred not in self.fact_predicates:
                raise TheoryError(f"fact {f} for non-fact predicate {f.pred}")
        for c in self.clauses:
            if c.head.pred in self.fact_predicates:
                raise TheoryError(f"fact predicate {c.head.pred} heads a clause")
        if self.root in self.fact_predicates:
            raise TheoryError("the root cannot be a fact predicate")
        _ = self.skeleton  # acyclicity check

    @cached_property
    def skeleton(self) -> Theory:
        """The predicate-level propositional theory (arguments dropped)."""
        return Theory(
            self.root,
            tuple(
                Clause(
                    c.head.pred,
                    tuple(Literal(l.atom.pred, l.positive, l.deleted) for l in c.body),
                    c.deleted,
                )
                for c in self.clauses
            ),
            self.fact_predicates,
        )

    @property
    def predicates(self) -> frozenset[str]:
        return self.skeleton.propositions

    def resolve(self, c: ComponentId):
        self.skeleton.resolve(c)
        if isinstance(c, PropId):
            return c.name
        i = self.skeleton.clause_position(c if isinstance(c, ClauseId) else c.clause)
        clause = self.clauses[i]
        return clause if isinstance(c, ClauseId) else clause.body[c.j]

    def resolves(self, c: ComponentId) -> bool:
        return self.skeleton.resolves(c)

    def live_clauses(self):
        for i, c in enumerate(self.clauses):
            if not c.deleted:
                yield self.skeleton.clause_id(i), c

    @cached_property
    def constants(self) -> frozenset[str]:
        atoms = list(self.facts)
        for c in self.clauses:
            atoms.append(c.head)
            atoms += [l.atom for l in c.body]
        return frozenset(a for atom in atoms for a in atom.args if not isinstance(a, Var))


@dataclass(frozen=True)
class FOLabeledExample:
    args: tuple[str, ...]
    label: bool

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self) -> str:
        return f"{'+' if self.label else '-'} {' '.join(self.args)}".rstrip()


# --------------------------------------------------------------------------
# text format

_VAR_RE = re.compile(r"^[A-Z][A-Za-z0-9_]*$")
_CONST_RE = re.compile(r"^[a-z0-9][a-z0-9_]*$")
_ATOM_RE = re.compile(rf"(?P<pred>{IDENT})\s*\((?P<args>[^()]*)\)")
_ROOT_RE = re.compile(rf"^root\s+({IDENT})\s*/\s*(\d+)\s*\.$")
_FACTDECL_RE = re.compile(rf"^fact\s+({IDENT})\s*\.$")


def _term(text: str, lineno: int) -> Term:
    text = text.strip()
    if _VAR_RE.match(text):
        return Var(text)
    if _CONST_RE.match(text):
        return text
    raise ParseError(f"bad term {text!r}", lineno)


def _atom(text: str, lineno: int) -> Atom:
    text = text.strip()
    m = _ATOM_RE.fullmatch(text)
    if not m:
        if re.fullmatch(IDENT, text):
            return Atom(text)
        raise ParseError(f"bad atom {text!r}", lineno)
    args = m["args"].strip()
    return Atom(m["pred"], tuple(_term(a, lineno) for a in args.split(",")) if args else ())


def _split_body(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_fo_theory(text: str) -> FOTheory:
    root = arity = None
    declared: set[str] = set()
    statements: list[tuple[Atom, tuple[FOLiteral, ...] | None]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _ROOT_RE.match(line):
            root, arity = m[1], int(m[2])
            continue
        if m := _FACTDECL_RE.match(line):
            declared.add(m[1])
            continue
        if not line.endswith("."):
            raise ParseError("statement must end with '.'", lineno, len(line))
        line = line[:-1]
        if ":-" in line:
            head, body = line.split(":-", 1)
            lits = []
            for part in _split_body(body):
                part = part.strip()
                positive = not part.startswith("not ")
                lits.append(FOLiteral(_atom(part if positive else part[4:], lineno), positive))
            statements.append((_atom(head, lineno), tuple(lits)))
        else:
            statements.append((_atom(line, lineno), None))
    if root is None:
        raise TheoryError("missing root declaration")
    rule_heads = {a.pred for a, body in statements if body} | {root}
    facts, clauses = [], []
    for atom, body in statements:
        if body or atom.pred in rule_heads:
            clauses.append(FOClause(atom, body or ()))
        else:
            facts.append(atom)
    used = {l.atom.pred for c in clauses for l in c.body}
    fact_preds = declared | {f.pred for f in facts} | (used - rule_heads)
    return FOTheory(root, arity, tuple(clauses), tuple(facts), frozenset(fact_preds))


def serialize_fo_theory(t: FOTheory) -> str:
    lines = [f"root {t.root}/{t.arity}."]
    with_facts = {f.pred for f in t.facts}
    used = {l.atom.pred for _, c in t.live_clauses() for l in c.live_body}
    lines += [f"fact {p}." for p in sorted(t.fact_predicates - with_facts - used)]
    lines += [str(c) for _, c in t.live_clauses()]
    lines += [f"{f}." for f in t.facts]
    return "\n".join(lines) + "\n"


def parse_fo_examples(text: str) -> list[FOLabeledExample]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sign, *args = line.split()
        if sign not in ("+", "-"):
            raise ParseError(f"example must start with + or -, got {sign!r}", lineno)
        for a in args:
            if not _CONST_RE.match(a):
                raise ParseError(f"bad constant {a!r}", lineno)
        out.append(FOLabeledExample(tuple(args), sign == "+"))
    return out


def serialize_fo_examples(es: Iterable[FOLabeledExample]) -> str:
    return "".join(f"{e}\n" for e in es)


# --------------------------------------------------------------------------
# evaluation


def _unify(pattern: Sequence[Term], values: Sequence[str], env: dict) -> dict | None:
    if len(pattern) != len(values):
        return None
    env = dict(env)
    for p, v in zip(pattern, values):
        if isinstance(p, Var):
            bound = env.setdefault(p, v)
            if bound != v:
                return None
        elif p != v:
            return None
    return env


def _fo_prove(t: FOTheory, query: tuple[str, ...], disabled: Iterable[ComponentId] = ()) -> bool:
    forced, off, true_lits = set(), set(), set()
    for c in disabled:
        if isinstance(c, PropId):
            forced.add(c.name)
        elif isinstance(c, ClauseId):
            off.add(t.skeleton.clause_position(c))
        else:
            true_lits.add((t.skeleton.clause_position(c.clause), c.j))
    domain = sorted(t.constants | set(query))
    by_head: dict[str, list[int]] = {}
    for i, c in enumerate(t.clauses):
        if not c.deleted and i not in off:
            by_head.setdefault(c.head.pred, []).append(i)
    facts: dict[str, list[Atom]] = {}
    for f in t.facts:
        facts.setdefault(f.pred, []).append(f)
    memo: dict[tuple, bool] = {}

    def holds(pred: str, args: tuple[str, ...]) -> bool:
        key = (pred, args)
        if key not in memo:
            if pred in forced:
                memo[key] = True
            elif pred in t.fact_predicates:
                memo[key] = any(_unify(f.args, args, {}) is not None for f in facts.get(pred, ()))
            else:
                memo[key] = any(clause_holds(i, args) for i in by_head.get(pred, ()))
        return memo[key]

    def clause_holds(i: int, args: tuple[str, ...]) -> bool:
        clause = t.clauses[i]
        env = _unify(clause.head.args, args, {})
        if env is None:
            return False
        body = [(j, lit) for j, lit in enumerate(clause.body)
                if not lit.deleted and (i, j) not in true_lits]
        return solve(body, env)

    def instances(atom: Atom, env: dict):
        free = sorted({v for v in atom.variables if v not in env}, key=lambda v: v.name)
        for values in product(domain, repeat=len(free)):
            full = {**env, **dict(zip(free, values))}
            yield full, tuple(full[a] if isinstance(a, Var) else a for a in atom.args)

    def solve(body, env) -> bool:
        if not body:
            return True
        (_, lit), rest = body[0], body[1:]
        if lit.positive:
            return any(holds(lit.atom.pred, args) and solve(rest, full)
                       for full, args in instances(lit.atom, env))
        # unbound variables under negation are read existentially
        if any(holds(lit.atom.pred, args) for _, args in instances(lit.atom, env)):
            return False
        return solve(rest, env)

    return holds(t.root, tuple(query))


def classify_fo(t: FOTheory, e: FOLabeledExample | Sequence[str],
                disabled: Iterable[ComponentId] = ()) -> bool:
    """Coverage of an example; ``disabled`` components are off for every instantiation."""
    args = e.args if isinstance(e, FOLabeledExample) else tuple(e)
    if len(args) != t.arity:
        raise TheoryError(f"example has {len(args)} arguments, root takes {t.arity}")
    return _fo_prove(t, args, disabled)


# --------------------------------------------------------------------------
# structural checks


class FOReport(NamedTuple):
    quasi_propositional: bool
    ground_facts_only: bool
    completely_bound: bool
    offending: tuple[str, ...] = ()


def _head_vector(c: FOClause) -> tuple | None:
    args = c.head.args
    if all(isinstance(a, Var) for a in args) and len(set(args)) == len(args):
        return args
    return None


def validate_fo(t: FOTheory) -> FOReport:
    completely_bound = True
    qp = True
    offending = []
    for _, c in t.live_clauses():
        head_vars = set(c.head.variables)
        vector = _head_vector(c)
        if vector is None or len(vector) != t.arity:
            qp = False
            offending.append(str(c.head))
        for lit in c.live_body:
            if not set(lit.atom.variables) <= head_vars:
                completely_bound = False
            if vector is None or lit.atom.args != vector:
                qp = False
                offending.append(str(lit.atom))
    qp = qp and completely_bound
    ground = all(f.ground for f in t.facts)
    return FOReport(qp, ground, completely_bound, tuple(dict.fromkeys(offending)))


def is_negation_free(t: FOTheory) -> bool:
    return all(lit.positive for _, c in t.live_clauses() for lit in c.live_body)


def depth(t: FOTheory) -> int:
    """Longest chain of rule applications from the root down to a fact predicate."""
    sk = t.skeleton
    longest: dict[str, int] = {}
    for p in reversed(sk.topological_order):
        below = [longest.get(l.prop, 0) + 1 for c in sk.clauses_for(p) for l in c.live_body]
        longest[p] = max(below, default=0)
    return longest[t.root]


def compute_fo_parity(t: FOTheory) -> dict:
    return compute_parity(t.skeleton)


# --------------------------------------------------------------------------
# propositionalization


@dataclass(frozen=True)
class PropositionalizedBundle:
    theory: Theory
    open: frozenset
    component_map: dict
    predicate_map: dict

    @property
    def patchable(self) -> PatchableTheory:
        return PatchableTheory(self.theory, self.open)


def _require_reducible(pt: PatchableTheory) -> FOReport:
    report = validate_fo(pt.theory)
    if not report.quasi_propositional:
        raise PreconditionError(
            f"theory is not quasi-propositional (offending: {', '.join(report.offending)})"
        )
    if not report.ground_facts_only:
        bad = [str(f) for f in pt.theory.facts if not f.ground]
        raise PreconditionError(f"theory has non-ground facts: {', '.join(bad)}")
    return report


def propositional_example(t: FOTheory, args: Sequence[str]) -> Example:
    true = {f.pred for f in t.facts if f.args == tuple(args)}
    return Example(frozenset(true))


def propositionalize(pt: PatchableTheory, es: Sequence[FOLabeledExample]
                     ) -> tuple[PropositionalizedBundle, list[LabeledExample]]:
    _require_reducible(pt)
    t: FOTheory = pt.theory
    hat = t.skeleton
    check = is_parity_definite(PatchableTheory(hat, pt.open))
    if not check.definite:
        raise NotParityDefinite(check.undefined)
    bundle = PropositionalizedBundle(
        hat,
        frozenset(pt.open),
        {c: c for c in pt.open},
        {p: p for p in sorted(t.predicates)},
    )
    hat_es = [LabeledExample(propositional_example(t, e.args), e.label) for e in es]
    return bundle, hat_es


# --------------------------------------------------------------------------
# first-order patching


@dataclass(frozen=True)
class FORevision:
    target: ComponentId
    kind: RevisionKind
    instantiations: frozenset[tuple[str, ...]] = frozenset()
    synthesized: tuple[str, ...] = ()


def _fresh_fact_predicate(t: FOTheory, c: ComponentId) -> str:
    stem = f"{AUX_PREFIX}{_slug(c)}_"
    n = sum(1 for p in t.predicates if p.startswith(stem))
    name = f"{stem}{n}"
    if name in t.predicates:
        raise TheoryError(f"{name} already occurs in the theory")
    return name


def _fo_delete(t: FOTheory, c: ComponentId) -> FOTheory:
    t.resolve(c)
    clauses = list(t.clauses)
    if isinstance(c, PropId):
        clauses.append(FOClause(Atom(c.name, tuple(Var(f"X{i + 1}") for i in range(t.arity)))))
    elif isinstance(c, ClauseId):
        i = t.skeleton.clause_position(c)
        clauses[i] = replace(clauses[i], deleted=True)
    else:
        i = t.skeleton.clause_position(c.clause)
        body = list(clauses[i].body)
        body[c.j] = replace(body[c.j], deleted=True)
        clauses[i] = replace(clauses[i], body=tuple(body))
    return replace(t, clauses=tuple(clauses))


def apply_fo_revision(t: FOTheory, r: FORevision) -> tuple[FOTheory, tuple[str, ...]]:
    """Realize a first-order revision; disabling uses a fresh ground-fact predicate."""
    if r.kind is RevisionKind.NULL:
        return t, ()
    if r.kind is RevisionKind.DELETE:
        return _fo_delete(t, r.target), ()
    t.resolve(r.target)
    q = _fresh_fact_predicate(t, r.target)
    facts = tuple(Atom(q, inst) for inst in sorted(r.instantiations))
    clauses = list(t.clauses)
    if isinstance(r.target, ClauseId):
        i = t.skeleton.clause_position(r.target)
        old = clauses[i]
        vector = old.head.args
        clauses[i] = replace(old, body=old.body + (FOLiteral(Atom(q, vector), positive=False),))
        edited = clauses[i]
    elif isinstance(r.target, PropId):
        vector = tuple(Var(f"X{i + 1}") for i in range(t.arity))
        edited = FOClause(Atom(r.target.name, vector), (FOLiteral(Atom(q, vector)),))
        clauses.append(edited)
    else:
        raise PreconditionError(f"literal {r.target} only admits deletion or null")
    revised = replace(
        t, clauses=tuple(clauses), facts=t.facts + facts, fact_predicates=t.fact_predicates | {q}
    )
    return revised, (str(edited),) + tuple(f"{f}." for f in facts)


def fpatch(pt: PatchableTheory, es: Sequence[FOLabeledExample]):
    """Patch a quasi-propositional, ground-fact theory through ``ppatch``.

    Returns ``Repaired`` holding first-order revisions and the revised
    first-order theory, or the propositional ``Unrepairable`` witness.
    """
    bundle, hat_es = propositionalize(pt, es)
    result = ppatch(bundle.patchable, hat_es)
    if isinstance(result, Unrepairable):
        return result
    inverse = {v: k for k, v in bundle.component_map.items()}
    theory: FOTheory = pt.theory
    revisions = []
    for r in result.revisions:
        fo_r = FORevision(
            inverse[r.target],
            r.kind,
            frozenset(es[i].args for i in r.disabling),
        )
        theory, added = apply_fo_revision(theory, fo_r)
        revisions.append(replace(fo_r, synthesized=added))
    return Repaired(tuple(revisions), theory)
