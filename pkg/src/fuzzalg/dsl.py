"""The workspace language: frames, signatures, theories, models, fuzzy sets, equations.

A file is a sequence of named declarations::

    frame H3 { elements 0 h 1; leq 0 < h < 1; }
    frame C = chain 3;
    sig G { op mul/2; op inv/1; const e; }
    vars x y z;
    theory Grp over H3 for G {
        |- mul(mul(x, y), z) == mul(x, mul(y, z));
        forall l: [mem l x] |- mem l inv(x);
    }
    model Z2 over H3 for G {
        carrier {e, g}
        mu {e: 1, g: h}
        op mul {(e, e) = e; (e, g) = g; (g, e) = g; (g, g) = e}
        op inv {(e) = e; (g) = g}
        const e = e
    }
    fuzzyset M over H3 { a: h, b: 1 }
    equation comm over H3 for G { gens {x: h} target Z2 val {x = g} }
    assignment w for Z2 { x = g }

Separators ``;`` and ``,`` between items are optional.  Names that are not
plain identifiers are written as double-quoted strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from ._lex import Cursor, ParseError, Token, quote, tokenize
from .algebra import AlgebraError, FuzzyAlgebra
from .frame import Frame, FrameError, FuzzySet, boolean, chain, frame_from_covers
from .hsp import XEquation
from .logic import Sequent, Theory, parse_sequent_at
from .syntax import Language, NameClash, Signature


class UnresolvedName(ParseError):
    """A declaration names an entity that does not exist (or exists twice)."""


@dataclass
class Assignment:
    model: str
    values: dict[str, str]
    name: str = ""


@dataclass
class Workspace:
    frames: dict[str, Frame] = field(default_factory=dict)
    signatures: dict[str, Signature] = field(default_factory=dict)
    variables: tuple[str, ...] = ()
    theories: dict[str, Theory] = field(default_factory=dict)
    models: dict[str, FuzzyAlgebra] = field(default_factory=dict)
    fuzzysets: dict[str, FuzzySet] = field(default_factory=dict)
    equations: dict[str, XEquation] = field(default_factory=dict)
    assignments: dict[str, Assignment] = field(default_factory=dict)
    locations: dict[tuple[str, str], tuple[int, int]] = field(default_factory=dict, compare=False)

    KINDS = ("frames", "signatures", "theories", "models", "fuzzysets", "equations", "assignments")
    SINGULAR = {"frames": "frame", "signatures": "signature", "theories": "theory", "models": "model",
                "fuzzysets": "fuzzyset", "equations": "equation", "assignments": "assignment"}

    def get(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            known = ", ".join(sorted(table)) or "none"
            raise UnresolvedName(f"no {Workspace.SINGULAR[kind]} named {name!r} (known: {known})")
        return table[name]

    def merge(self, other: Workspace) -> Workspace:
        out = Workspace(variables=tuple(dict.fromkeys(self.variables + other.variables)))
        for kind in self.KINDS:
            table = dict(getattr(self, kind))
            for k, v in getattr(other, kind).items():
                if k in table:
                    raise UnresolvedName(f"{Workspace.SINGULAR[kind]} {k!r} declared twice")
                table[k] = v
            setattr(out, kind, table)
        out.locations = {**self.locations, **other.locations}
        return out

    def frame_name(self, frame: Frame) -> str | None:
        return next((k for k, f in self.frames.items() if f == frame), None)

    def signature_name(self, sig: Signature) -> str | None:
        return next((k for k, s in self.signatures.items() if s == sig), None)


# ---------------------------------------------------------------- parsing

class _Parser:
    def __init__(self, text: str, base: Workspace | None = None):
        self.cur = Cursor(tokenize(text))
        self.base = base or Workspace()
        self.ws = Workspace()

    def lookup(self, kind: str, tok: Token):
        for ws in (self.ws, self.base):
            table = getattr(ws, kind)
            if tok.text in table:
                return table[tok.text]
        if kind == "frames":
            builtin = _builtin_frame(tok.text)
            if builtin is not None:
                return builtin
        raise UnresolvedName(f"no {Workspace.SINGULAR[kind]} named {tok.text!r}", tok.line, tok.col)

    def declare(self, kind: str, tok: Token, value) -> None:
        if tok.text in getattr(self.ws, kind) or tok.text in getattr(self.base, kind):
            raise UnresolvedName(f"{Workspace.SINGULAR[kind]} {tok.text!r} declared twice", tok.line, tok.col)
        getattr(self.ws, kind)[tok.text] = value
        self.ws.locations[(kind, tok.text)] = (tok.line, tok.col)

    def sep(self) -> None:
        while self.cur.at(";") or self.cur.at(","):
            self.cur.advance()

    def parse(self) -> Workspace:
        cur = self.cur
        handlers = {"frame": self.frame, "sig": self.sig, "vars": self.vars, "theory": self.theory,
                    "model": self.model, "fuzzyset": self.fuzzyset, "equation": self.equation,
                    "assignment": self.assignment}
        while True:
            self.sep()
            tok = cur.tok
            if tok.kind == "eof":
                return self.ws
            if tok.kind != "name" or tok.text not in handlers:
                raise cur.error(f"expected a declaration, found {tok.text!r}")
            cur.advance()
            handlers[tok.text]()

    def int_(self) -> int:
        tok = self.cur.name("number")
        try:
            return int(tok.text)
        except ValueError:
            raise self.cur.error(f"expected a number, found {tok.text!r}", tok) from None

    def names_until(self, *stops: str) -> list[Token]:
        out = []
        while not any(self.cur.at(s) for s in stops):
            if self.cur.at(","):
                self.cur.advance()
                continue
            out.append(self.cur.name())
        return out

    # -- frames

    def frame(self) -> None:
        cur = self.cur
        name = cur.name("frame name")
        if cur.accept("="):
            kind = cur.name("chain or bool")
            n = self.int_()
            if kind.text == "chain":
                f = chain(n)
            elif kind.text == "bool":
                f = boolean(n)
            else:
                raise cur.error(f"unknown built-in frame {kind.text!r}", kind)
        else:
            cur.expect("{")
            elements: list[str] = []
            pairs: list[tuple[str, str]] = []
            while not cur.accept("}"):
                self.sep()
                if cur.accept("elements"):
                    elements += [t.text for t in self.names_until(";", "}", "leq")]
                elif cur.accept("leq"):
                    while not (cur.at(";") or cur.at("}")):
                        if cur.accept(","):
                            continue
                        left = cur.name("level")
                        while cur.accept("<"):
                            right = cur.name("level")
                            pairs.append((left.text, right.text))
                            left = right
                elif cur.at("}"):
                    continue
                else:
                    raise cur.error(f"expected elements or leq, found {cur.tok.text!r}")
            try:
                f = frame_from_covers(elements, pairs, name=name.text)
            except FrameError as exc:
                raise ParseError(str(exc), name.line, name.col) from None
        self.declare("frames", name, f)

    # -- signatures and variables

    def sig(self) -> None:
        cur = self.cur
        name = cur.name("signature name")
        cur.expect("{")
        ops: list[tuple[str, int]] = []
        consts: list[str] = []
        while not cur.accept("}"):
            self.sep()
            if cur.accept("op"):
                while True:
                    f = cur.name("operation")
                    cur.expect("/")
                    ops.append((f.text, self.int_()))
                    if not (cur.accept(",") and cur.peek(1).text == "/"):
                        break
            elif cur.accept("const"):
                consts += [t.text for t in self.names_until(";", "}", "op", "const")]
            elif not cur.at("}"):
                raise cur.error(f"expected op or const, found {cur.tok.text!r}")
        try:
            sig = Signature(tuple(ops), frozenset(consts))
        except (ValueError, NameClash) as exc:
            raise ParseError(str(exc), name.line, name.col) from None
        self.declare("signatures", name, sig)

    def vars(self) -> None:
        toks = self.names_until(";", "}")
        self.ws.variables = tuple(dict.fromkeys(self.ws.variables + tuple(t.text for t in toks)))

    def _frame_sig(self, need_sig: bool = True):
        cur = self.cur
        frame = sig = None
        while cur.at("over") or cur.at("for"):
            word = cur.advance().text
            tok = cur.name()
            if word == "over":
                frame = self.lookup("frames", tok)
            else:
                sig = self.lookup("signatures", tok)
        if frame is None:
            raise cur.error("missing 'over <frame>'")
        if sig is None and need_sig:
            sigs = {**self.base.signatures, **self.ws.signatures}
            if len(sigs) != 1:
                raise cur.error("missing 'for <signature>'")
            sig = next(iter(sigs.values()))
        return frame, sig

    # -- theories

    def theory(self) -> None:
        cur = self.cur
        name = cur.name("theory name")
        frame, sig = self._frame_sig()
        cur.expect("{")
        variables = None
        axioms: list[Sequent] = []
        lang = None

        def language() -> Language:
            nonlocal lang
            if lang is None:
                vs = variables if variables is not None else self.ws.variables or self.base.variables
                try:
                    lang = Language(sig, tuple(vs))
                except NameClash as exc:
                    raise ParseError(str(exc), name.line, name.col) from None
            return lang

        while True:
            self.sep()
            if cur.accept("}"):
                break
            if cur.accept("vars"):
                if lang is not None:
                    raise cur.error("vars must come before the axioms")
                variables = [t.text for t in self.names_until(";", "}")]
                continue
            if cur.accept("forall"):
                lv = cur.name("level variable")
                cur.expect(":")
                start = cur.i
                for level in frame.elements:
                    cur.i = start
                    axioms.append(parse_sequent_at(cur, language(), frame, {lv.text: level}))
                continue
            axioms.append(parse_sequent_at(cur, language(), frame))
        self.declare("theories", name, Theory(language(), frame, axioms, name=name.text))

    # -- models

    def _element(self, carrier_index: dict[str, int]) -> int:
        tok = self.cur.name("element")
        if tok.text not in carrier_index:
            raise UnresolvedName(f"{tok.text!r} is not in the carrier", tok.line, tok.col)
        return carrier_index[tok.text]

    def _model_body(self, name: Token, frame: Frame, sig: Signature) -> FuzzyAlgebra:
        cur = self.cur
        cur.expect("{")
        carrier: list[str] | None = None
        mu: dict[int, object] = {}
        ops: dict[str, np.ndarray] = {}
        filled: dict[str, np.ndarray] = {}
        consts: dict[str, int] = {}
        index: dict[str, int] = {}

        def need_carrier(tok):
            if carrier is None:
                raise cur.error("carrier must be declared first", tok)

        while True:
            self.sep()
            if cur.accept("}"):
                break
            tok = cur.name("model item")
            if tok.text == "carrier":
                cur.expect("{")
                carrier = [t.text for t in self.names_until("}")]
                cur.expect("}")
                index = {c: i for i, c in enumerate(carrier)}
                if len(index) != len(carrier):
                    raise cur.error("carrier names repeat", tok)
            elif tok.text == "mu":
                need_carrier(tok)
                cur.expect("{")
                while not cur.accept("}"):
                    if cur.accept(",") or cur.accept(";"):
                        continue
                    a = self._element(index)
                    cur.expect(":")
                    lt = cur.name("level")
                    try:
                        mu[a] = frame[lt.text]
                    except KeyError:
                        raise ParseError(f"unknown level {lt.text!r}", lt.line, lt.col) from None
            elif tok.text == "op":
                need_carrier(tok)
                ftok = cur.name("operation")
                if not sig.has_op(ftok.text):
                    raise UnresolvedName(f"unknown operation {ftok.text!r}", ftok.line, ftok.col)
                k = sig.arity(ftok.text)
                n = len(carrier)
                tab = np.zeros((n,) * k, dtype=np.int64)
                seen = np.zeros((n,) * k, dtype=bool)
                cur.expect("{")
                while not cur.accept("}"):
                    if cur.accept(",") or cur.accept(";"):
                        continue
                    at = cur.tok
                    if cur.accept("("):
                        args = [self._element(index)]
                        while cur.accept(","):
                            args.append(self._element(index))
                        cur.expect(")")
                    else:
                        args = [self._element(index)]
                    if len(args) != k:
                        raise cur.error(f"{ftok.text} takes {k} argument(s)", at)
                    cur.expect("=")
                    tab[tuple(args)] = self._element(index)
                    seen[tuple(args)] = True
                if not seen.all():
                    missing = tuple(carrier[i] for i in np.argwhere(~seen)[0])
                    raise cur.error(f"table of {ftok.text} is partial: no entry for {missing}", ftok)
                ops[ftok.text] = tab
                filled[ftok.text] = seen
            elif tok.text == "const":
                need_carrier(tok)
                ctok = cur.name("constant")
                if ctok.text not in sig.consts:
                    raise UnresolvedName(f"unknown constant {ctok.text!r}", ctok.line, ctok.col)
                cur.expect("=")
                consts[ctok.text] = self._element(index)
            else:
                raise cur.error(f"expected carrier, mu, op or const, found {tok.text!r}", tok)
        if carrier is None:
            raise cur.error("model has no carrier", name)
        missing = [c for i, c in enumerate(carrier) if i not in mu]
        if missing:
            raise ParseError(f"no level for {missing}", name.line, name.col)
        for f, k in sig.ops:
            if f not in ops:
                if len(carrier) == 0:
                    ops[f] = np.zeros((0,) * k, dtype=np.int64)
                else:
                    raise ParseError(f"no table for operation {f}", name.line, name.col)
        try:
            return FuzzyAlgebra(sig, frame, carrier, [mu[i] for i in range(len(carrier))], ops,
                                consts, name=name.text)
        except AlgebraError as exc:
            raise ParseError(f"model {name.text}: {exc}", name.line, name.col) from exc

    def model(self) -> None:
        name = self.cur.name("model name")
        frame, sig = self._frame_sig()
        self.declare("models", name, self._model_body(name, frame, sig))

    def _levels_block(self, frame: Frame) -> dict:
        cur = self.cur
        cur.expect("{")
        out = {}
        while not cur.accept("}"):
            if cur.accept(",") or cur.accept(";"):
                continue
            m = cur.name("element")
            cur.expect(":")
            lt = cur.name("level")
            if m.text in out:
                raise cur.error(f"{m.text!r} listed twice", m)
            try:
                out[m.text] = frame[lt.text]
            except KeyError:
                raise ParseError(f"unknown level {lt.text!r}", lt.line, lt.col) from None
        return out

    def fuzzyset(self) -> None:
        name = self.cur.name("fuzzy set name")
        frame, _ = self._frame_sig(need_sig=False)
        self.declare("fuzzysets", name, FuzzySet(frame, self._levels_block(frame)))

    def equation(self) -> None:
        cur = self.cur
        name = cur.name("equation name")
        frame, sig = self._frame_sig()
        cur.expect("{")
        gens = target = None
        val: dict[str, str] = {}
        while True:
            self.sep()
            if cur.accept("}"):
                break
            tok = cur.name("equation item")
            if tok.text == "gens":
                gens = FuzzySet(frame, self._levels_block(frame))
            elif tok.text == "target":
                if cur.at("{"):
                    target = self._model_body(Token("name", f"{name.text}.target", tok.line, tok.col),
                                              frame, sig)
                else:
                    target = self.lookup("models", cur.name("model name"))
            elif tok.text == "val":
                cur.expect("{")
                while not cur.accept("}"):
                    if cur.accept(",") or cur.accept(";"):
                        continue
                    x = cur.name("generator")
                    cur.expect("=")
                    val[x.text] = cur.name("element").text
            else:
                raise cur.error(f"expected gens, target or val, found {tok.text!r}", tok)
        if gens is None or target is None:
            raise ParseError("equation needs gens and target", name.line, name.col)
        try:
            e = XEquation(gens, target, val, name=name.text)
        except (ValueError, AlgebraError) as exc:
            raise ParseError(f"equation {name.text}: {exc}", name.line, name.col) from exc
        self.declare("equations", name, e)

    def assignment(self) -> None:
        cur = self.cur
        name = cur.name("assignment name")
        cur.expect("for")
        mtok = cur.name("model name")
        A = self.lookup("models", mtok)
        cur.expect("{")
        values = {}
        while not cur.accept("}"):
            if cur.accept(",") or cur.accept(";"):
                continue
            x = cur.name("variable")
            cur.expect("=")
            v = cur.name("element")
            if v.text not in A.carrier:
                raise UnresolvedName(f"{v.text!r} is not in the carrier of {mtok.text}", v.line, v.col)
            values[x.text] = v.text
        self.declare("assignments", name, Assignment(mtok.text, values, name.text))


def _builtin_frame(name: str) -> Frame | None:
    for prefix, make in (("chain", chain), ("bool", boolean)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return make(int(name[len(prefix):]))
    return None


def parse_workspace(text: str, base: Workspace | None = None) -> Workspace:
    """Parse declarations; names may refer to entities of ``base``."""
    return _Parser(text, base).parse()


def load_workspace(*paths: str | Path) -> Workspace:
    ws = Workspace()
    for p in paths:
        ws = ws.merge(parse_workspace(Path(p).read_text(), base=ws))
    return ws


def bundled_fixtures() -> Workspace:
    return parse_workspace((Path(__file__).parent / "data" / "fixtures.fz").read_text())


# ---------------------------------------------------------------- printing

def _q(names) -> str:
    return " ".join(quote(n) for n in names)


def dump_frame(frame: Frame, name: str) -> str:
    n = len(frame)
    if frame == chain(n):
        return f"frame {quote(name)} = chain {n};"
    k = n.bit_length() - 1
    if n == 1 << k and frame == boolean(k):
        return f"frame {quote(name)} = bool {k};"
    leq = frame.leq_table
    covers = [(a, b) for a, b in product(range(n), repeat=2)
              if a != b and leq[a, b] and not any(c not in (a, b) and leq[a, c] and leq[c, b]
                                                  for c in range(n))]
    rel = ", ".join(f"{quote(frame.names[a])} < {quote(frame.names[b])}" for a, b in covers)
    return f"frame {quote(name)} {{ elements {_q(frame.names)}; leq {rel}; }}"


def dump_signature(sig: Signature, name: str) -> str:
    parts = [f"op {quote(f)}/{k};" for f, k in sig.ops]
    if sig.consts:
        parts.append(f"const {_q(sorted(sig.consts))};")
    return f"sig {quote(name)} {{ {' '.join(parts)} }}"


class _Names:
    """Names for frames and signatures, taken from a workspace or invented."""

    def __init__(self, ws: Workspace | None):
        self.frames = dict(ws.frames) if ws else {}
        self.sigs = dict(ws.signatures) if ws else {}
        self.new: list[str] = []

    def frame(self, f: Frame) -> str:
        for k, g in self.frames.items():
            if g == f:
                return k
        k = _fresh(f.name or "F", self.frames)
        self.frames[k] = f
        self.new.append(dump_frame(f, k))
        return k

    def sig(self, s: Signature) -> str:
        for k, g in self.sigs.items():
            if g == s:
                return k
        k = _fresh("Sig", self.sigs)
        self.sigs[k] = s
        self.new.append(dump_signature(s, k))
        return k


def _fresh(base: str, taken) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def dump_theory(theory: Theory, name: str | None = None, names: _Names | None = None) -> str:
    names = names or _Names(None)
    fr, sg = names.frame(theory.frame), names.sig(theory.signature)
    lines = [f"theory {quote(name or theory.name or 'T')} over {quote(fr)} for {quote(sg)} {{"]
    lines.append(f"  vars {_q(theory.language.variables)};")
    lines += [f"  {ax};" for ax in theory.axioms]
    lines.append("}")
    return "\n".join(lines)


def _model_body(A: FuzzyAlgebra, indent: str) -> list[str]:
    c = A.carrier
    lines = [f"{indent}carrier {{{', '.join(quote(x) for x in c)}}}",
             f"{indent}mu {{{', '.join(f'{quote(x)}: {quote(l.name)}' for x, l in zip(c, A.mu))}}}"]
    for f, tab in sorted(A.ops.items()):
        entries = []
        for args in product(range(A.size), repeat=tab.ndim):
            entries.append(f"({', '.join(quote(c[a]) for a in args)}) = {quote(c[int(tab[args])])}")
        lines.append(f"{indent}op {quote(f)} {{{'; '.join(entries)}}}")
    for k in sorted(A.consts):
        lines.append(f"{indent}const {quote(k)} = {quote(c[A.consts[k]])}")
    return lines


def dump_model(A: FuzzyAlgebra, name: str | None = None, names: _Names | None = None) -> str:
    names = names or _Names(None)
    fr, sg = names.frame(A.frame), names.sig(A.signature)
    head = f"model {quote(name or A.name or 'A')} over {quote(fr)} for {quote(sg)} {{"
    return "\n".join([head, *_model_body(A, "  "), "}"])


def _levels(M: FuzzySet) -> str:
    return "{" + ", ".join(f"{quote(m)}: {quote(l.name)}" for m, l in M.levels.items()) + "}"


def dump_fuzzyset(M: FuzzySet, name: str, names: _Names | None = None) -> str:
    names = names or _Names(None)
    return f"fuzzyset {quote(name)} over {quote(names.frame(M.frame))} {_levels(M)}"


def dump_equation(e: XEquation, name: str | None = None, names: _Names | None = None) -> str:
    names = names or _Names(None)
    B = e.target
    fr, sg = names.frame(B.frame), names.sig(B.signature)
    val = ", ".join(f"{quote(x)} = {quote(B.carrier[b])}" for x, b in e.valuation.items())
    lines = [f"equation {quote(name or e.name or 'e')} over {quote(fr)} for {quote(sg)} {{",
             f"  gens {_levels(e.generators)}", "  target {", *_model_body(B, "    "), "  }",
             f"  val {{{val}}}", "}"]
    return "\n".join(lines)


def dump_assignment(a: Assignment) -> str:
    vals = "; ".join(f"{quote(x)} = {quote(v)}" for x, v in a.values.items())
    return f"assignment {quote(a.name)} for {quote(a.model)} {{{vals}}}"


def dump_workspace(ws: Workspace) -> str:
    names = _Names(None)
    for k, f in ws.frames.items():
        names.frames[k] = f
    for k, s in ws.signatures.items():
        names.sigs[k] = s
    body = []
    if ws.variables:
        body.append(f"vars {_q(ws.variables)};")
    body += [dump_theory(t, k, names) for k, t in ws.theories.items()]
    body += [dump_model(A, k, names) for k, A in ws.models.items()]
    body += [dump_fuzzyset(M, k, names) for k, M in ws.fuzzysets.items()]
    body += [dump_equation(e, k, names) for k, e in ws.equations.items()]
    body += [dump_assignment(a) for a in ws.assignments.values()]
    head = [dump_frame(f, k) for k, f in ws.frames.items()]
    head += [dump_signature(s, k) for k, s in ws.signatures.items()]
    return "\n\n".join(head + names.new + body) + "\n"


def dump_entities(*items, ws: Workspace | None = None) -> str:
    """Self-contained text for the given theories/models/equations, declaring what they use."""
    names = _Names(ws)
    body = []
    for item in items:
        if isinstance(item, Theory):
            body.append(dump_theory(item, names=names))
        elif isinstance(item, FuzzyAlgebra):
            body.append(dump_model(item, names=names))
        elif isinstance(item, XEquation):
            body.append(dump_equation(item, names=names))
        elif isinstance(item, Assignment):
            body.append(dump_assignment(item))
        elif isinstance(item, tuple) and len(item) == 2 and isinstance(item[1], FuzzySet):
            body.append(dump_fuzzyset(item[1], item[0], names))
        else:
            raise TypeError(f"cannot print {item!r}")
    return "\n\n".join(names.new + body) + "\n"
