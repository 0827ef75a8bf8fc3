"""Propositional domain theories: data model, text formats and component edits.

A theory is an acyclic set of definite clauses whose bodies may contain
negation-as-failure literals.  Components (propositions, clauses and body
literal occurrences) are addressed by ids that survive deletions: deleted
clauses and literals are tombstoned in place instead of being removed, and a
deleted proposition gets a fact clause appended at the end.
"""

from __future__ import annotations

import enum
import graphlib
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field, replace
from functools import cached_property

from .errors import CycleError, ParseError, TheoryError, UnresolvedComponent

IDENT = r"[a-z_][a-z0-9_]*"
_IDENT_RE = re.compile(IDENT)


# --------------------------------------------------------------------------
# component ids


@dataclass(frozen=True)
class PropId:
    name: str

    def __str__(self) -> str:
        return f"p:{self.name}"


@dataclass(frozen=True)
class ClauseId:
    head: str
    k: int

    def __str__(self) -> str:
        return f"c:{self.head}/{self.k}"


@dataclass(frozen=True)
class LitId:
    head: str
    k: int
    j: int

    @property
    def clause(self) -> ClauseId:
        return ClauseId(self.head, self.k)

    def __str__(self) -> str:
        return f"l:{self.head}/{self.k}/{self.j}"


ComponentId = PropId | ClauseId | LitId

_KIND_RANK = {PropId: 0, ClauseId: 1, LitId: 2}


def component_sort_key(c: ComponentId) -> tuple:
    if isinstance(c, PropId):
        return (0, c.name)
    if isinstance(c, ClauseId):
        return (1, c.head, c.k)
    return (2, c.head, c.k, c.j)


_CID_RE = re.compile(
    rf"^(?:p:(?P<p>{IDENT})|c:(?P<c>{IDENT})/(?P<ck>\d+)|l:(?P<l>{IDENT})/(?P<lk>\d+)/(?P<lj>\d+))$"
)


def parse_component_id(text: str) -> ComponentId:
    m = _CID_RE.match(text.strip())
    if not m:
        raise TheoryError(f"malformed component id {text!r}")
    if m["p"]:
        return PropId(m["p"])
    if m["c"]:
        return ClauseId(m["c"], int(m["ck"]))
    return LitId(m["l"], int(m["lk"]), int(m["lj"]))


# --------------------------------------------------------------------------
# theory model


@dataclass(frozen=True)
class Literal:
    prop: str
    positive: bool = True
    deleted: bool = False

    def __str__(self) -> str:
        return self.prop if self.positive else f"not {self.prop}"


@dataclass(frozen=True)
class Clause:
    head: str
    body: tuple[Literal, ...] = ()
    deleted: bool = False

    @property
    def live_body(self) -> tuple[Literal, ...]:
        return tuple(lit for lit in self.body if not lit.deleted)

    def __str__(self) -> str:
        body = self.live_body
        if not body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, body))}."


class Policy(enum.Enum):
    UNRESTRICTED = "unrestricted"
    DELETION_ONLY = "deletion-only"


@dataclass(frozen=True)
class Theory:
    root: str
    clauses: tuple[Clause, ...]
    primitives: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        object.__setattr__(self, "primitives", frozenset(self.primitives))
        self._validate()

    def _validate(self) -> None:
        if not _IDENT_RE.fullmatch(self.root):
            raise TheoryError(f"bad root name {self.root!r}")
        if self.root in self.primitives:
            raise TheoryError(f"root {self.root!r} is declared primitive")
        for clause in self.clauses:
            if clause.head in self.primitives:
                raise TheoryError(f"primitive {clause.head!r} used as a clause head")
        try:
            tuple(self._sorter().static_order())
        except graphlib.CycleError as exc:
            cycle = " -> ".join(reversed(exc.args[1]))
            raise CycleError(f"cyclic dependency: {cycle}") from None

    def _sorter(self) -> graphlib.TopologicalSorter:
        # predecessors of a proposition are the heads whose live clauses use it
        ts = graphlib.TopologicalSorter()
        for name in self.propositions:
            ts.add(name)
        for clause in self.clauses:
            if clause.deleted:
                continue
            for lit in clause.live_body:
                ts.add(lit.prop, clause.head)
        return ts

    @cached_property
    def propositions(self) -> frozenset[str]:
        names = {self.root, *self.primitives}
        for clause in self.clauses:
            names.add(clause.head)
            names.update(lit.prop for lit in clause.body)
        return frozenset(names)

    @cached_property
    def internal(self) -> tuple[str, ...]:
        """Non-primitive propositions, root first, then in first-mention order."""
        seen = {self.root: None}
        for clause in self.clauses:
            seen.setdefault(clause.head, None)
            for lit in clause.body:
                if lit.prop not in self.primitives:
                    seen.setdefault(lit.prop, None)
        return tuple(seen)

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        """All propositions, every head before the propositions its body uses."""
        return tuple(self._sorter().static_order())

    @cached_property
    def _ordinals(self) -> tuple[int, ...]:
        counts: dict[str, int] = {}
        out = []
        for clause in self.clauses:
            k = counts.get(clause.head, 0)
            counts[clause.head] = k + 1
            out.append(k)
        return tuple(out)

    @cached_property
    def _index(self) -> dict[ClauseId, int]:
        return {
            ClauseId(c.head, k): i for i, (c, k) in enumerate(zip(self.clauses, self._ordinals))
        }

    def clause_id(self, i: int) -> ClauseId:
        return ClauseId(self.clauses[i].head, self._ordinals[i])

    def live_clauses(self) -> Iterator[tuple[ClauseId, Clause]]:
        for i, clause in enumerate(self.clauses):
            if not clause.deleted:
                yield self.clause_id(i), clause

    def clauses_for(self, head: str) -> list[Clause]:
        return [c for c in self.clauses if c.head == head and not c.deleted]

    def clause_position(self, cid: ClauseId) -> int:
        """Global position of a live clause, raising if it does not resolve."""
        i = self._index.get(cid)
        if i is None or self.clauses[i].deleted:
            raise UnresolvedComponent(f"{cid} does not resolve")
        return i

    def resolves(self, c: ComponentId) -> bool:
        try:
            self.resolve(c)
        except UnresolvedComponent:
            return False
        return True

    def resolve(self, c: ComponentId):
        """Return the component addressed by ``c`` (a name, Clause or Literal)."""
        if isinstance(c, PropId):
            if c.name not in self.propositions or c.name in self.primitives:
                raise UnresolvedComponent(f"{c} does not name a non-primitive proposition")
            return c.name
        if isinstance(c, ClauseId):
            return self.clauses[self.clause_position(c)]
        if isinstance(c, LitId):
            clause = self.clauses[self.clause_position(c.clause)]
            if c.j >= len(clause.body) or clause.body[c.j].deleted:
                raise UnresolvedComponent(f"{c} does not resolve")
            return clause.body[c.j]
        raise TypeError(f"not a component id: {c!r}")


# --------------------------------------------------------------------------
# examples


@dataclass(frozen=True)
class Example:
    true: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "true", frozenset(self.true))

    def __str__(self) -> str:
        return " ".join(sorted(self.true))


@dataclass(frozen=True)
class LabeledExample:
    example: Example
    label: bool

    def __str__(self) -> str:
        sign = "+" if self.label else "-"
        return f"{sign} {self.example}".rstrip()


def check_example(t: Theory, e: Example) -> None:
    unknown = e.true - t.primitives
    if unknown:
        raise TheoryError(f"example names non-primitive propositions: {sorted(unknown)}")


@dataclass(frozen=True)
class PatchableTheory:
    theory: Theory
    open: frozenset = field(default_factory=frozenset)
    policy: Policy = Policy.UNRESTRICTED

    def __post_init__(self):
        object.__setattr__(self, "open", frozenset(self.open))
        for c in self.open:
            self.theory.resolve(c)

    @property
    def ordered_open(self) -> list[ComponentId]:
        return sorted(self.open, key=component_sort_key)


# --------------------------------------------------------------------------
# theory file format

_ROOT_RE = re.compile(rf"^root\s+({IDENT})\s*\.$")
_PRIM_RE = re.compile(rf"^primitive\s+({IDENT})\s*\.$")
_FACT_RE = re.compile(rf"^({IDENT})\s*\.$")
_RULE_RE = re.compile(rf"^({IDENT})\s*:-\s*(.*)\.$")
_LIT_RE = re.compile(rf"^(not\s+)?({IDENT})$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_theory(text: str) -> Theory:
    root = None
    declared: set[str] = set()
    clauses: list[Clause] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if m := _ROOT_RE.match(stripped):
            if root is not None:
                raise ParseError("duplicate root declaration", lineno, col)
            root = m[1]
        elif m := _PRIM_RE.match(stripped):
            declared.add(m[1])
        elif m := _FACT_RE.match(stripped):
            clauses.append(Clause(m[1]))
        elif m := _RULE_RE.match(stripped):
            body = []
            offset = col + m.start(2)
            for part in m[2].split(","):
                lm = _LIT_RE.match(part.strip())
                if not lm:
                    raise ParseError(f"bad literal {part.strip()!r}", lineno, offset)
                body.append(Literal(lm[2], positive=lm[1] is None))
                offset += len(part) + 1
            if not body:
                raise ParseError("empty rule body", lineno, col)
            clauses.append(Clause(m[1], tuple(body)))
        else:
            raise ParseError(f"cannot parse {stripped!r}", lineno, col)
    if root is None:
        raise TheoryError("missing root declaration")
    heads = {c.head for c in clauses}
    used = {lit.prop for c in clauses for lit in c.body}
    primitives = declared | (used - heads - {root})
    return Theory(root, tuple(clauses), frozenset(primitives))


def serialize_theory(t: Theory) -> str:
    """Render the live part of ``t``; tombstones are dropped."""
    lines = [f"root {t.root}."]
    used = {lit.prop for _, c in t.live_clauses() for lit in c.live_body}
    lines += [f"primitive {p}." for p in sorted(t.primitives - used)]
    lines += [str(c) for _, c in t.live_clauses()]
    return "\n".join(lines) + "\n"


def parse_open(text: str) -> frozenset:
    ids = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        try:
            ids.add(parse_component_id(line))
        except TheoryError as exc:
            raise ParseError(str(exc), lineno) from None
    return frozenset(ids)


def serialize_open(ids: Iterable[ComponentId]) -> str:
    return "".join(f"{c}\n" for c in sorted(ids, key=component_sort_key))


def parse_examples(text: str) -> list[LabeledExample]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        sign, *names = line.split()
        if sign not in ("+", "-"):
            raise ParseError(f"example must start with + or -, got {sign!r}", lineno)
        for n in names:
            if not _IDENT_RE.fullmatch(n):
                raise ParseError(f"bad proposition name {n!r}", lineno)
        out.append(LabeledExample(Example(frozenset(names)), sign == "+"))
    return out


def serialize_examples(es: Iterable[LabeledExample]) -> str:
    return "".join(f"{le}\n" for le in es)


# --------------------------------------------------------------------------
# components and deletion


def enumerate_components(t: Theory) -> list[ComponentId]:
    """Non-primitive propositions, then live clauses, then live body literals."""
    props = [PropId(p) for p in t.internal]
    clauses = []
    lits = []
    for cid, clause in t.live_clauses():
        clauses.append(cid)
        lits += [LitId(cid.head, cid.k, j) for j, lit in enumerate(clause.body) if not lit.deleted]
    return props + clauses + lits


def delete_component(t: Theory, c: ComponentId) -> Theory:
    t.resolve(c)
    clauses = list(t.clauses)
    if isinstance(c, PropId):
        clauses.append(Clause(c.name))
    elif isinstance(c, ClauseId):
        i = t.clause_position(c)
        clauses[i] = replace(clauses[i], deleted=True)
    else:
        i = t.clause_position(c.clause)
        body = list(clauses[i].body)
        body[c.j] = replace(body[c.j], deleted=True)
        clauses[i] = replace(clauses[i], body=tuple(body))
    return Theory(t.root, tuple(clauses), t.primitives)


def delete_components(t: Theory, ids: Iterable[ComponentId]) -> Theory:
    """Delete several components; literals of an already-deleted clause are skipped."""
    for c in sorted(ids, key=component_sort_key):
        if isinstance(c, LitId) and not t.resolves(c.clause) and c.clause in t._index:
            continue
        t = delete_component(t, c)
    return t
