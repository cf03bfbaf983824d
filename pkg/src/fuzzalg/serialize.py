"""JSON encodings of derivations, term models, closure reports and countermodels."""

from __future__ import annotations

import json
from typing import Any

from .algebra import FuzzyAlgebra
from .dsl import Assignment, Workspace, dump_entities, parse_workspace
from .hsp import ClosureReport, Witness
from .logic import Theory, parse_formula, parse_sequent
from .proof.derivation import (RULES, Axiom, Cong, Cut, Derivation, Exp, Mon, Sub, Sup, Weak,
                               rule_name)
from .semantics import Countermodel, NoneUpTo, TermModel
from .syntax import Substitution, parse_term


class FormatError(ValueError):
    pass


# ---------------------------------------------------------------- derivations

def derivation_to_json(d: Derivation) -> dict[str, Any]:
    rule = d.rule
    side: dict[str, Any] = {}
    if isinstance(rule, Weak):
        side["delta"] = sorted(str(p) for p in rule.delta)
    elif isinstance(rule, Cut):
        side["phis"] = [str(p) for p in rule.phis]
    elif isinstance(rule, Sub):
        side["sigma"] = {x: str(t) for x, t in sorted(rule.sigma.items())}
    elif isinstance(rule, (Cong, Exp)):
        side["op"] = rule.op
    elif isinstance(rule, Mon):
        side["level"] = rule.level.name
    elif isinstance(rule, Sup):
        side["levels"] = [l.name for l in rule.levels]
    elif isinstance(rule, Axiom) and rule.index is not None:
        side["index"] = rule.index
    out: dict[str, Any] = {"rule": rule_name(rule), "conclusion": str(d.conclusion)}
    if side:
        out["side"] = side
    if d.premises:
        out["premises"] = [derivation_to_json(p) for p in d.premises]
    return out


def derivation_from_json(data: dict[str, Any], theory: Theory) -> Derivation:
    lang, frame = theory.language, theory.frame

    def build(node: dict, path: str) -> Derivation:
        try:
            name = node["rule"]
            cls = RULES[name]
        except KeyError:
            raise FormatError(f"{path}: unknown or missing rule {node.get('rule')!r}") from None
        side = node.get("side", {})
        try:
            if cls is Weak:
                rule = Weak(frozenset(parse_formula(p, lang, frame) for p in side["delta"]))
            elif cls is Cut:
                rule = Cut(tuple(parse_formula(p, lang, frame) for p in side["phis"]))
            elif cls is Sub:
                rule = Sub(Substitution({x: parse_term(t, lang) for x, t in side["sigma"].items()}))
            elif cls in (Cong, Exp):
                rule = cls(side["op"])
            elif cls is Mon:
                rule = Mon(frame[side["level"]])
            elif cls is Sup:
                rule = Sup(tuple(frame[l] for l in side["levels"]))
            elif cls is Axiom:
                rule = Axiom(side.get("index"))
            else:
                rule = cls()
            concl = parse_sequent(node["conclusion"], lang, frame)
        except KeyError as exc:
            raise FormatError(f"{path}: missing or unknown {exc}") from None
        prem = tuple(build(p, f"{path}.{i}") for i, p in enumerate(node.get("premises", [])))
        return Derivation(concl, rule, prem)

    return build(data, "root")


def dumps_derivation(d: Derivation) -> str:
    return json.dumps(derivation_to_json(d), indent=1)


def loads_derivation(text: str, theory: Theory) -> Derivation:
    return derivation_from_json(json.loads(text), theory)


# ---------------------------------------------------------------- term models

def term_model_to_json(tm: TermModel) -> dict[str, Any]:
    return {
        "theory": tm.theory.name,
        "depth": tm.depth,
        "complete": tm.complete,
        "closed": tm.closed,
        "classes": [{"rep": str(r), "level": l.name, "frontier": f, "size": s}
                    for r, l, f, s in zip(tm.reps, tm.levels, tm.frontier, tm.sizes)],
        "tables": {f: [[*args, r] for args, r in sorted(tab.items())]
                   for f, tab in sorted(tm.tables.items())},
        "consts": dict(sorted(tm.consts.items())),
    }


def term_model_from_json(data: dict[str, Any], theory: Theory) -> TermModel:
    lang, frame = theory.language, theory.frame
    classes = data["classes"]
    return TermModel(
        theory, data["depth"],
        [parse_term(c["rep"], lang) for c in classes],
        [frame[c["level"]] for c in classes],
        [bool(c["frontier"]) for c in classes],
        [int(c["size"]) for c in classes],
        {f: {tuple(row[:-1]): row[-1] for row in rows} for f, rows in data["tables"].items()},
        dict(data["consts"]), bool(data["complete"]))


# ---------------------------------------------------------------- reports

def _model_text(A: FuzzyAlgebra) -> str:
    return dump_entities(A)


def _model_from_text(text: str) -> FuzzyAlgebra:
    ws = parse_workspace(text)
    if len(ws.models) != 1:
        raise FormatError("embedded model text must declare exactly one model")
    return next(iter(ws.models.values()))


def closure_report_to_json(r: ClosureReport) -> dict[str, Any]:
    def wit(w: Witness) -> dict[str, Any]:
        return {"construction": w.construction, "sources": list(w.sources), "detail": w.detail,
                "model": _model_text(w.algebra)}
    return {
        "mode": r.mode,
        "passed": r.passed,
        "flags": r.flags(),
        "checked": r.checked,
        "violations": {k: [wit(w) for w in v] for k, v in r.violations.items()},
        "findings": [wit(w) for w in r.findings],
    }


def closure_report_from_json(data: dict[str, Any]) -> ClosureReport:
    def wit(d: dict) -> Witness:
        return Witness(d["construction"], tuple(d["sources"]), _model_from_text(d["model"]), d["detail"])
    return ClosureReport(data["mode"], dict(data["checked"]),
                         {k: [wit(w) for w in v] for k, v in data["violations"].items()},
                         [wit(w) for w in data["findings"]])


def countermodel_text(result: Countermodel, ws: Workspace | None = None) -> str:
    """A model file with an assignment block naming the refuting values."""
    A = result.algebra
    name = A.name or "counter"
    A = A.renamed(A.carrier, name)
    return dump_entities(A, Assignment(name, result.named_assignment(), "witness"), ws=ws)


def countermodel_to_json(result: Countermodel | NoneUpTo) -> dict[str, Any]:
    if isinstance(result, NoneUpTo):
        return {"result": "none", "max_size": result.size}
    return {"result": "countermodel", "sequent": str(result.sequent),
            "assignment": result.named_assignment(), "model": countermodel_text(result)}
