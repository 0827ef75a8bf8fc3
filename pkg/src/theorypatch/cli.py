"""Command-line front end.

Examples in every input and output are numbered from 1 in file order.  Exit
codes: 0 success, 2 input error, 3 unrepairable or failed verification,
4 precondition violated, 5 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from pathlib import Path

from .errors import BudgetExceeded, PreconditionError, TheoryError
from .evaluation import classify
from .firstorder import (
    FOTheory,
    classify_fo,
    fpatch,
    parse_fo_examples,
    parse_fo_theory,
    propositionalize,
    serialize_fo_examples,
    serialize_fo_theory,
)
from .parity import compute_parity
from .patch import (
    Repaired,
    Revision,
    RevisionKind,
    oracle_patch,
    ppatch,
    synthesize,
    synthesized_clauses,
    verify_patch,
)
from .reductions import (
    monotone_sat_to_fpatch_ground,
    monotone_sat_to_fpatch_qp,
    parse_dimacs,
    sat_to_ppatch,
)
from .stability import DEFAULT_BUDGET, oracle_stable, pstable
from .theory import (
    PatchableTheory,
    check_example,
    enumerate_components,
    parse_component_id,
    parse_examples,
    parse_open,
    parse_theory,
    serialize_examples,
    serialize_open,
    serialize_theory,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNREPAIRED = 3
EXIT_PRECONDITION = 4
EXIT_BUDGET = 5

DOCUMENT_FORMAT = "theorypatch-patch/1"


class InputError(Exception):
    pass


def _read(path: str | None, what: str) -> str:
    if path is None:
        raise InputError(f"--{what} is required")
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _load_patchable(args, open_required: bool = True):
    theory = parse_theory(_read(args.theory, "theory"))
    if args.open is None and not open_required:
        opens = frozenset()
    else:
        opens = parse_open(_read(args.open, "open"))
    return PatchableTheory(theory, opens)


def _load_examples(args, theory):
    es = parse_examples(_read(args.examples, "examples"))
    for le in es:
        check_example(theory, le.example)
    return es


def _load_fo(args):
    theory = parse_fo_theory(_read(args.theory, "theory"))
    opens = parse_open(_read(args.open, "open")) if args.open else frozenset()
    es = parse_fo_examples(_read(args.examples, "examples"))
    for e in es:
        if len(e.args) != theory.arity:
            raise TheoryError(f"example {e} does not have arity {theory.arity}")
    return PatchableTheory(theory, opens), es


# --------------------------------------------------------------------------
# patch documents


def _revision_record(r: Revision) -> dict:
    return {
        "component": str(r.target),
        "kind": r.kind.value,
        "disabling": [i + 1 for i in sorted(r.disabling)],
        "synthesized": list(r.synthesized),
    }


def _revision_from_record(rec: dict) -> Revision:
    return Revision(
        parse_component_id(rec["component"]),
        RevisionKind(rec["kind"]),
        frozenset(i - 1 for i in rec["disabling"]),
        tuple(rec.get("synthesized", ())),
    )


def _verify_record(report) -> dict:
    return {
        "passed": report.passed,
        "classification_ok": report.classification_ok,
        "misclassified": [i + 1 for i in report.misclassified],
        "components": [
            {
                "component": str(c.component),
                "obstructive": [i + 1 for i in sorted(c.obstructive)],
                "protected": [i + 1 for i in sorted(c.protected)],
                "disabling": [i + 1 for i in sorted(c.disabling)],
                "passed": c.passed,
            }
            for c in report.components
        ],
    }


def build_document(pt: PatchableTheory, es, result) -> dict:
    """Patch document with normalized inputs, revisions, verdict and checks."""
    inputs = {
        "theory": serialize_theory(pt.theory),
        "open": serialize_open(pt.open),
        "examples": serialize_examples(es),
    }
    doc = {
        "format": DOCUMENT_FORMAT,
        "digests": {k: digest(v) for k, v in inputs.items()},
        "inputs": inputs,
    }
    if isinstance(result, Repaired):
        final = serialize_theory(result.theory)
        doc["revisions"] = [_revision_record(r) for r in result.revisions]
        doc["verdict"] = "repaired"
        doc["unrepairable"] = None
        doc["final_theory"] = final
        doc["final_digest"] = digest(final)
        doc["verify"] = _verify_record(verify_patch(pt, result.revisions, es))
    else:
        doc["revisions"] = []
        doc["verdict"] = "unrepairable"
        doc["unrepairable"] = {
            "component": None if result.component is None else str(result.component),
            "examples": [i + 1 for i in result.examples],
            "reason": result.reason,
        }
        doc["final_theory"] = None
        doc["final_digest"] = None
        doc["verify"] = None
    return doc


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def check_document(doc: dict) -> list[str]:
    """Problems found when replaying ``doc``; empty when it verifies."""
    if doc.get("format") != DOCUMENT_FORMAT:
        raise InputError(f"not a patch document (format {doc.get('format')!r})")
    inputs = doc["inputs"]
    problems = []
    for k, text in inputs.items():
        if digest(text) != doc["digests"][k]:
            problems.append(f"{k} digest mismatch")
    if doc["verdict"] != "repaired":
        problems.append(f"verdict is {doc['verdict']}")
        return problems
    pt = PatchableTheory(parse_theory(inputs["theory"]), parse_open(inputs["open"]))
    es = parse_examples(inputs["examples"])
    revisions = [_revision_from_record(rec) for rec in doc["revisions"]]
    report = verify_patch(pt, revisions, es)
    if not report.classification_ok:
        problems.append(f"misclassified examples {[i + 1 for i in report.misclassified]}")
    for c in report.components:
        if not c.covers_obstructive:
            problems.append(f"{c.component}: obstructive examples left enabled")
        if not c.spares_protected:
            problems.append(f"{c.component}: protected examples disabled")
    theory = pt.theory
    for r in revisions:
        if r.synthesized and synthesized_clauses(theory, r, es) != r.synthesized:
            problems.append(f"{r.target}: synthesized clauses differ")
        theory = synthesize(theory, r, es)
    final = serialize_theory(theory)
    if digest(final) != doc["final_digest"]:
        problems.append("final theory digest mismatch")
    return problems


# --------------------------------------------------------------------------
# subcommands


def cmd_classify(args, out) -> int:
    pt = _load_patchable(args, open_required=False)
    for i, le in enumerate(_load_examples(args, pt.theory), 1):
        out.write(f"{i}\t{'T' if classify(pt.theory, le.example) else 'F'}\n")
    return EXIT_OK


def cmd_parity(args, out) -> int:
    pt = _load_patchable(args, open_required=False)
    parity = compute_parity(pt.theory)
    for c in enumerate_components(pt.theory):
        mark = "\topen" if c in pt.open else ""
        out.write(f"{c}\t{parity[c].value}{mark}\n")
    return EXIT_OK


def cmd_stable(args, out) -> int:
    pt = _load_patchable(args)
    for i, le in enumerate(_load_examples(args, pt.theory), 1):
        if args.oracle:
            v = oracle_stable(pt, le.example, args.budget)
        else:
            v = pstable(pt, le.example)
        out.write(f"{i}\t{v.value}\n")
    return EXIT_OK


def cmd_patch(args, out) -> int:
    pt = _load_patchable(args)
    es = _load_examples(args, pt.theory)
    result = oracle_patch(pt, es) if args.oracle else ppatch(pt, es)
    doc = build_document(pt, es, result)
    text = dump_document(doc)
    if args.out:
        outdir = Path(args.out)
        _write(outdir / "patch.json", text)
        if doc["final_theory"] is not None:
            _write(outdir / "revised.th", doc["final_theory"])
    else:
        out.write(text)
    if not result.repaired:
        sys.stderr.write(f"unrepairable: {doc['unrepairable']['reason']}\n")
        return EXIT_UNREPAIRED
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        doc = json.loads(_read(args.document, "document"))
    except json.JSONDecodeError as exc:
        raise InputError(f"patch document is not valid JSON: {exc}") from None
    problems = check_document(doc)
    for p in problems:
        out.write(f"FAIL\t{p}\n")
    if problems:
        return EXIT_UNREPAIRED
    out.write("PASS\n")
    return EXIT_OK


def cmd_gen_sat(args, out) -> int:
    cnf = parse_dimacs(_read(args.cnf, "cnf"))
    if args.form == "t1":
        pt, example = sat_to_ppatch(cnf)
        files = {
            "theory.th": serialize_theory(pt.theory),
            "theory.open": serialize_open(pt.open),
            "examples.ex": serialize_examples([example]),
        }
    else:
        build = monotone_sat_to_fpatch_ground if args.form == "t7" else monotone_sat_to_fpatch_qp
        pt, es = build(cnf)
        files = {
            "theory.fo": serialize_fo_theory(pt.theory),
            "theory.open": serialize_open(pt.open),
            "examples.fex": serialize_fo_examples(es),
        }
    return _emit(files, args.out, out)


def _emit(files: dict, outdir: str | None, out) -> int:
    for name, text in files.items():
        if outdir:
            _write(Path(outdir) / name, text)
            out.write(f"{Path(outdir) / name}\n")
        else:
            out.write(f"# {name}\n{text}")
    return EXIT_OK


def cmd_fo_reduce(args, out) -> int:
    pt, es = _load_fo(args)
    bundle, hat_es = propositionalize(pt, es)
    files = {
        "theory.th": serialize_theory(bundle.theory),
        "theory.open": serialize_open(bundle.open),
        "examples.ex": serialize_examples(hat_es),
    }
    return _emit(files, args.out, out)


def cmd_fpatch(args, out) -> int:
    pt, es = _load_fo(args)
    result = fpatch(pt, es)
    if not result.repaired:
        where = "" if result.component is None else f" at {result.component}"
        sys.stderr.write(f"unrepairable{where}: {result.reason}\n")
        return EXIT_UNREPAIRED
    theory: FOTheory = result.theory
    wrong = [i for i, e in enumerate(es, 1) if classify_fo(theory, e) != e.label]
    lines = []
    for r in result.revisions:
        inst = " ".join("(" + ",".join(a) + ")" for a in sorted(r.instantiations))
        lines.append(f"{r.target}\t{r.kind.value}\t{inst}".rstrip() + "\n")
    lines.append(f"misclassified\t{' '.join(map(str, wrong)) or '-'}\n")
    text = serialize_fo_theory(theory)
    if args.out:
        _write(Path(args.out) / "revised.fo", text)
    else:
        lines.append(text)
    out.write("".join(lines))
    return EXIT_OK if not wrong else EXIT_UNREPAIRED


def cmd_selftest(args, out) -> int:
    from .generate import random_examples, random_patchable

    rng = random.Random(args.seed)
    stable_bad = patch_bad = verify_bad = 0
    for _ in range(args.count):
        pt = random_patchable(rng)
        es = random_examples(rng, pt, 10)
        stable_bad += sum(pstable(pt, le.example) != oracle_stable(pt, le.example) for le in es)
        ours, ref = ppatch(pt, es), oracle_patch(pt, es)
        patch_bad += ours.repaired != ref.repaired
        if ours.repaired and not verify_patch(pt, ours.revisions, es).passed:
            verify_bad += 1
    out.write(f"instances\t{args.count}\n")
    out.write(f"stability_disagreements\t{stable_bad}\n")
    out.write(f"patch_disagreements\t{patch_bad}\n")
    out.write(f"verify_failures\t{verify_bad}\n")
    return EXIT_OK if stable_bad == patch_bad == verify_bad == 0 else EXIT_UNREPAIRED


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="theorypatch", description="Patch domain theories against labeled examples.")
    sub = parser.add_subparsers(dest="command", required=True)

    def files(p, open_=True, examples=True):
        p.add_argument("--theory", required=True)
        if open_:
            p.add_argument("--open")
        if examples:
            p.add_argument("--examples", required=True)

    p = sub.add_parser("classify", help="classify each example")
    files(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("parity", help="print the parity of every component")
    files(p, examples=False)
    p.set_defaults(func=cmd_parity)

    p = sub.add_parser("stable", help="stability verdict per example")
    files(p)
    p.add_argument("--oracle", action="store_true", help="enumerate every obtainable view")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_stable)

    p = sub.add_parser("patch", help="patch a theory and emit a patch document")
    files(p)
    p.add_argument("--oracle", action="store_true", help="use the exhaustive search")
    p.add_argument("--out", help="directory for patch.json and revised.th")
    p.set_defaults(func=cmd_patch)

    p = sub.add_parser("verify", help="check a patch document")
    p.add_argument("document")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen-sat", help="generate a patching instance from a CNF")
    p.add_argument("--cnf", required=True)
    p.add_argument("--form", choices=("t1", "t7", "t8"), default="t1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_sat)

    p = sub.add_parser("fo-reduce", help="propositionalize a first-order instance")
    files(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fo_reduce)

    p = sub.add_parser("fpatch", help="patch a first-order theory")
    files(p)
    p.add_argument("--out", help="directory for revised.fo")
    p.set_defaults(func=cmd_fpatch)

    p = sub.add_parser("selftest", help="seeded equivalence checks against the oracles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except PreconditionError as exc:
        sys.stderr.write(f"precondition: {exc}\n")
        return EXIT_PRECONDITION
    except (TheoryError, InputError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
