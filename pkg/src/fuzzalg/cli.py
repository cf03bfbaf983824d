"""Command-line frontend: ``fuzzalg <command> ...``.

Exit codes: 0 success, 1 semantic rejection, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import Callable

from ._lex import ParseError
from .algebra import AlgebraError, dedupe_isomorphic
from .dsl import Workspace, bundled_fixtures, dump_entities, load_workspace, parse_workspace
from .frame import FrameError, chain
from .hsp import MODES, closure_check, equation_to_theory, unconditional_equation_to_theory
from .logic import Theory, classify_theory, parse_sequent
from .proof.checker import DerivationError, check_derivation
from .proof.saturate import BudgetExhausted
from .semantics import (Countermodel, enumerate_models, find_countermodel, free_model, is_model,
                        model_violation, term_model)
from .serialize import (FormatError, closure_report_to_json, countermodel_text,
                        countermodel_to_json, loads_derivation, term_model_to_json)
from .syntax import Language

OK, REJECTED, INPUT_ERROR = 0, 1, 2
FIXTURES = "@fixtures"


class InputError(Exception):
    pass


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, human: str, data: dict) -> None:
        if self.fmt == "structured":
            print(json.dumps(data, indent=1, sort_keys=True), file=self.stream)
        else:
            print(human, file=self.stream)


def _workspace(args) -> Workspace:
    paths = args.workspace or [FIXTURES]
    ws = Workspace()
    for p in paths:
        if p == FIXTURES:
            ws = ws.merge(bundled_fixtures())
            continue
        try:
            text = Path(p).read_text()
        except OSError as exc:
            raise InputError(f"{p}: {exc.strerror}") from None
        try:
            ws = ws.merge(parse_workspace(text, base=ws))
        except (ParseError, FrameError, AlgebraError, ValueError) as exc:
            raise InputError(f"{p}: {exc}") from None
    return ws


def _get(ws: Workspace, kind: str, name: str):
    try:
        return ws.get(kind, name)
    except ParseError as exc:
        raise InputError(str(exc)) from None


def _write(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)


# ---------------------------------------------------------------- commands

def cmd_check_proof(args, ws: Workspace, out: Output) -> int:
    theory = _get(ws, "theories", args.theory)
    try:
        d = loads_derivation(Path(args.derivation).read_text(), theory)
    except OSError as exc:
        raise InputError(f"{args.derivation}: {exc.strerror}") from None
    except (json.JSONDecodeError, FormatError, ParseError, ValueError) as exc:
        raise InputError(f"{args.derivation}: {exc}") from None
    try:
        s = check_derivation(theory, d, literal_trans=args.literal_trans)
    except DerivationError as exc:
        out.emit(f"rejected at {exc}", {"verified": False, "path": list(exc.path),
                                        "error": exc.msg, "kind": type(exc).__name__})
        return REJECTED
    out.emit(f"verified: {s}", {"verified": True, "conclusion": str(s),
                                "nodes": d.size(), "depth": d.depth()})
    return OK


def cmd_check_model(args, ws: Workspace, out: Output) -> int:
    A = _get(ws, "models", args.model)
    theory = _get(ws, "theories", args.theory)
    if A.frame != theory.frame or A.signature != theory.signature:
        raise InputError(f"model {args.model} and theory {args.theory} use different frames or signatures")
    bad = model_violation(A, theory)
    if bad is None:
        out.emit(f"{args.model} is a model of {args.theory}", {"model": True})
        return OK
    ax, env = bad
    named = {x: A.carrier[v] for x, v in env.items()}
    out.emit(f"{args.model} violates {ax} at {named}",
             {"model": False, "axiom": str(ax), "assignment": named})
    return REJECTED


def _language_for(ws: Workspace, args) -> tuple[Theory, bool]:
    if args.theory:
        return _get(ws, "theories", args.theory), False
    frame = _get(ws, "frames", args.frame) if args.frame else chain(2)
    sig = _get(ws, "signatures", args.sig) if args.sig else None
    if sig is None:
        if len(ws.signatures) != 1:
            raise InputError("no theory given: name a signature with --sig")
        sig = next(iter(ws.signatures.values()))
    return Theory(Language(sig, ws.variables or ("x", "y", "z")), frame, [], name="empty"), True


def cmd_find_countermodel(args, ws: Workspace, out: Output) -> int:
    theory, _ = _language_for(ws, args)
    if args.theory and args.frame and _get(ws, "frames", args.frame) != theory.frame:
        raise InputError("--frame differs from the theory's frame")
    try:
        s = parse_sequent(args.sequent, theory.language, theory.frame)
    except ParseError as exc:
        raise InputError(f"sequent: {exc}") from None
    res = find_countermodel(theory, s, args.max_size)
    if isinstance(res, Countermodel):
        text = countermodel_text(res)
        _write(args, text)
        out.emit(text.rstrip(), countermodel_to_json(res))
        return REJECTED
    out.emit(f"none up to {res.size}", countermodel_to_json(res))
    return OK


def _emit_term_model(args, out: Output, tm, extra: dict | None = None) -> None:
    data = term_model_to_json(tm)
    if extra:
        data.update(extra)
    _write(args, json.dumps(data, indent=1, sort_keys=True) + "\n")
    lines = [f"{len(tm.reps)} classes (closed: {tm.closed}, complete: {tm.complete})"]
    lines += [f"  {r}  level {l}{'  [frontier]' if f else ''}"
              for r, l, f in zip(tm.reps, tm.levels, tm.frontier)]
    out.emit("\n".join(lines), data)


def cmd_term_model(args, ws: Workspace, out: Output) -> int:
    theory = _get(ws, "theories", args.theory)
    try:
        tm = term_model(theory, args.depth, max_steps=args.budget)
    except BudgetExhausted as exc:
        partial = getattr(exc, "partial_model", None)
        if partial is not None:
            _emit_term_model(args, out, partial, {"budget_exhausted": True})
        else:
            out.emit(f"budget exhausted: {exc}", {"budget_exhausted": True, "error": str(exc)})
        return REJECTED
    _emit_term_model(args, out, tm)
    return OK


def cmd_free_model(args, ws: Workspace, out: Output) -> int:
    theory = _get(ws, "theories", args.theory)
    M = _get(ws, "fuzzysets", args.fuzzyset)
    if M.frame != theory.frame:
        raise InputError("the fuzzy set and the theory use different frames")
    try:
        fm = free_model(theory, M, args.depth, max_steps=args.budget)
    except BudgetExhausted as exc:
        out.emit(f"budget exhausted: {exc}", {"budget_exhausted": True, "error": str(exc)})
        return REJECTED
    unit = {m: {"class": i, "level": fm.unit_level(m).name} for m, i in sorted(fm.unit.items())}
    _emit_term_model(args, out, fm.model, {"unit": unit})
    return OK


def cmd_classify(args, ws: Workspace, out: Output) -> int:
    theory = _get(ws, "theories", args.theory)
    c = classify_theory(theory)
    human = c.label if c.witness is None else f"{c.label} (blocked by {c.witness})"
    out.emit(human, {"class": c.label, "witness": None if c.witness is None else str(c.witness)})
    return OK


def cmd_eq2th(args, ws: Workspace, out: Output) -> int:
    e = _get(ws, "equations", args.equation)
    try:
        th = (unconditional_equation_to_theory if args.unconditional else equation_to_theory)(
            e, name=args.name or f"th_{args.equation}")
    except ValueError as exc:
        out.emit(f"rejected: {exc}", {"error": str(exc), "kind": type(exc).__name__})
        return REJECTED
    text = dump_entities(th)
    _write(args, text)
    out.emit(text.rstrip(), {"theory": text, "axioms": [str(s) for s in th.axioms]})
    return OK


def cmd_closure(args, ws: Workspace, out: Output) -> int:
    theory = _get(ws, "theories", args.theory)
    family = dedupe_isomorphic(enumerate_models(theory, args.max_size))
    modes = MODES if args.mode == "both" else (args.mode,)
    reports = {m: closure_check(family, m, member=lambda A: is_model(A, theory)) for m in modes}
    data = {"theory": args.theory, "family": len(family), "max_size": args.max_size,
            "reports": {m: closure_report_to_json(r) for m, r in reports.items()}}
    _write(args, json.dumps(data, indent=1, sort_keys=True) + "\n")
    lines = [f"{len(family)} models of {args.theory} up to size {args.max_size} (up to isomorphism)"]
    for m, r in reports.items():
        flags = ", ".join(f"{k}={'-' if v is None else ('ok' if v else 'FAIL')}"
                          for k, v in r.flags().items())
        lines.append(f"{m}: {'pass' if r.passed else 'FAIL'} ({flags}; {len(r.findings)} findings)")
    out.emit("\n".join(lines), data)
    return OK if all(r.passed for r in reports.values()) else REJECTED


def cmd_validate(args, ws: Workspace, out: Output) -> int:
    summary = {}
    base = Workspace()
    for p in args.files:
        try:
            text = Path(p).read_text()
        except OSError as exc:
            raise InputError(f"{p}: {exc.strerror}") from None
        try:
            w = parse_workspace(text, base=base)
            base = base.merge(w)
        except (ParseError, FrameError, AlgebraError, ValueError) as exc:
            raise InputError(f"{p}: {exc}") from None
        summary[p] = {k: sorted(getattr(w, k)) for k in Workspace.KINDS if getattr(w, k)}
    human = "\n".join(f"{p}: ok ({', '.join(f'{len(v)} {k}' for k, v in s.items()) or 'empty'})"
                      for p, s in summary.items())
    out.emit(human, {"files": summary})
    return OK


# ---------------------------------------------------------------- parser

COMMANDS: dict[str, Callable] = {
    "check-proof": cmd_check_proof,
    "check-model": cmd_check_model,
    "find-countermodel": cmd_find_countermodel,
    "term-model": cmd_term_model,
    "free-model": cmd_free_model,
    "classify": cmd_classify,
    "eq2th": cmd_eq2th,
    "closure": cmd_closure,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fuzzalg", description="Fuzzy equational logic toolkit.")
    p.add_argument("-w", "--workspace", action="append", metavar="FILE",
                   help=f"workspace file (repeatable); default is the bundled fixtures, "
                        f"also available as {FIXTURES}")
    p.add_argument("--format", choices=("human", "structured"), default="human")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check-proof", help="verify a derivation (JSON) against a theory")
    c.add_argument("theory")
    c.add_argument("derivation")
    c.add_argument("--literal-trans", "--paper-literal", dest="literal_trans", action="store_true",
                   help="also accept the Trans variant whose conclusion repeats its second premise")

    c = sub.add_parser("check-model", help="check that a model satisfies a theory")
    c.add_argument("model")
    c.add_argument("theory")

    c = sub.add_parser("find-countermodel", help="search models of a theory refuting a sequent")
    c.add_argument("theory", nargs="?", help="theory name; omitted means the empty theory")
    c.add_argument("sequent")
    c.add_argument("--max-size", type=int, default=3)
    c.add_argument("--frame", help="frame for the empty theory (default chain2)")
    c.add_argument("--sig", help="signature for the empty theory")
    c.add_argument("-o", "--output", help="write the countermodel file here")

    for name, want_set in (("term-model", False), ("free-model", True)):
        c = sub.add_parser(name, help=f"compute the {'free' if want_set else 'term'} model up to a depth")
        c.add_argument("theory")
        if want_set:
            c.add_argument("fuzzyset")
        c.add_argument("--depth", type=int, default=3)
        c.add_argument("--budget", type=int, default=1_000_000, help="saturation step budget")
        c.add_argument("-o", "--output", help="write the serialized model here")

    c = sub.add_parser("classify", help="unconditional / type_E / basic / general")
    c.add_argument("theory")

    c = sub.add_parser("eq2th", help="theory whose models are the algebras satisfying an equation")
    c.add_argument("equation")
    c.add_argument("--unconditional", action="store_true")
    c.add_argument("--name")
    c.add_argument("-o", "--output")

    c = sub.add_parser("closure", help="closure check on the models of a theory up to a size")
    c.add_argument("theory")
    c.add_argument("--max-size", type=int, default=2)
    c.add_argument("--mode", choices=(*MODES, "both"), default="both")
    c.add_argument("-o", "--output")

    c = sub.add_parser("validate", help="parse and validate workspace files")
    c.add_argument("files", nargs="+")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    out = Output(args.format)
    try:
        ws = Workspace() if args.command == "validate" else _workspace(args)
        code = COMMANDS[args.command](args, ws, out)
        sys.stdout.flush()
        return code
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except BrokenPipeError:
        # downstream closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return OK


if __name__ == "__main__":
    sys.exit(main())
