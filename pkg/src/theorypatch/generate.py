"""Seeded random instances for the equivalence suites."""

from __future__ import annotations

import random
from itertools import product

from .evaluation import classify_view
from .firstorder import Atom, FOClause, FOLabeledExample, FOLiteral, FOTheory, Var
from .parity import Parity, compute_parity
from .reductions import CNF
from .theory import (
    Clause,
    Example,
    LabeledExample,
    Literal,
    LitId,
    PatchableTheory,
    Policy,
    Theory,
    enumerate_components,
)

PRIMITIVE_NAMES = "abcdefgh"


def random_theory(rng: random.Random, max_props: int = 8, max_clauses: int = 10,
                  neg_prob: float = 0.3) -> Theory:
    """Acyclic theory whose internal propositions are all reachable from the root."""
    n_internal = rng.randint(2, 4)
    n_prims = rng.randint(2, max_props - n_internal)
    internal = ["r"] + [f"p{i}" for i in range(1, n_internal)]
    prims = list(PRIMITIVE_NAMES[:n_prims])
    n_clauses = rng.randint(n_internal, max_clauses)
    heads = internal + [rng.choice(internal) for _ in range(n_clauses - n_internal)]
    heads.sort(key=internal.index)
    clauses = []
    for i, head in enumerate(heads):
        below = internal[internal.index(head) + 1:] + prims
        body = rng.sample(below, rng.randint(1, min(3, len(below))))
        clauses.append([head, body])
    # make every internal proposition below the root occur in some earlier body
    for k, p in enumerate(internal[1:], 1):
        if not any(p in body for _, body in clauses):
            users = [c for c in clauses if internal.index(c[0]) < k]
            rng.choice(users)[1].append(p)
    return Theory(
        "r",
        tuple(
            Clause(h, tuple(Literal(p, rng.random() >= neg_prob) for p in body))
            for h, body in clauses
        ),
        frozenset(prims),
    )


def random_patchable(rng: random.Random, max_open: int = 6, **kw) -> PatchableTheory:
    """Random theory with open components drawn from those with defined parity."""
    t = random_theory(rng, **kw)
    parity = compute_parity(t)
    candidates = [c for c in enumerate_components(t) if parity[c] is not Parity.UNDEFINED]
    k = rng.randint(0, min(max_open, len(candidates)))
    return PatchableTheory(t, rng.sample(candidates, k))


def random_examples(rng: random.Random, pt: PatchableTheory, n: int,
                    consistent: bool | None = None) -> list[LabeledExample]:
    """``n`` distinct examples (fewer if the primitives cannot supply them).

    With ``consistent`` the labels come from one random obtainable theory, so
    the instance is repairable; otherwise labels are coin flips.
    """
    prims = sorted(pt.theory.primitives)
    pool = [frozenset(p for p, bit in zip(prims, bits) if bit)
            for bits in product((0, 1), repeat=len(prims))]
    chosen = rng.sample(pool, min(n, len(pool)))
    if consistent is None:
        consistent = rng.random() < 0.5
    opens = pt.ordered_open
    lits = [c for c in opens if isinstance(c, LitId) and rng.random() < 0.5]
    others = [c for c in opens if not isinstance(c, LitId)]
    out = []
    for true in chosen:
        e = Example(true)
        if consistent:
            disabled = lits + [c for c in others if rng.random() < 0.5]
            label = classify_view(pt.theory, e, disabled)
        else:
            label = rng.random() < 0.5
        out.append(LabeledExample(e, label))
    return out


def random_cnf(rng: random.Random, max_vars: int = 10, max_clauses: int = 20,
               monotone: bool = False) -> CNF:
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_clauses)
    variables = tuple(f"v{i}" for i in range(1, n + 1))
    clauses = []
    for _ in range(m):
        width = rng.randint(1, min(3, n))
        vs = rng.sample(variables, width)
        if monotone:
            sign = rng.random() < 0.5
            clauses.append(tuple((v, sign) for v in vs))
        else:
            clauses.append(tuple((v, rng.random() < 0.5) for v in vs))
    return CNF(variables, tuple(clauses))


def random_quasi_propositional(rng: random.Random, arity: int | None = None,
                               constants: str = "012", n_examples: int = 8):
    """Quasi-propositional ground-fact theory, open set and examples."""
    skeleton = random_patchable(rng, max_props=7, max_clauses=8, max_open=5)
    t = skeleton.theory
    arity = rng.randint(1, 2) if arity is None else arity
    vec = tuple(Var(f"X{i}") for i in range(1, arity + 1))
    tuples = list(product(constants, repeat=arity))
    clauses = tuple(
        FOClause(Atom(c.head, vec), tuple(FOLiteral(Atom(l.prop, vec), l.positive) for l in c.body))
        for c in t.clauses
    )
    facts = tuple(
        Atom(p, args) for p in sorted(t.primitives) for args in tuples if rng.random() < 0.4
    )
    fo = FOTheory(t.root, arity, clauses, facts, t.primitives)
    examples = [
        FOLabeledExample(args, rng.random() < 0.5)
        for args in rng.sample(tuples, min(n_examples, len(tuples)))
    ]
    return PatchableTheory(fo, skeleton.open, Policy.UNRESTRICTED), examples
