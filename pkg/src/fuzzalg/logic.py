"""Formulas, sequents, theories and their transport along language morphisms."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Union

from ._lex import Cursor, ParseError, quote, tokenize
from .frame import Frame, FrameElement, FuzzySet
from .syntax import (App, Const, constants_of, Language, LanguageMorphism, NameClash, Term, Var,
                     parse_term_at, substitute, validate_term, variables_of,
                     term_key)


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} == {self.rhs}"


@dataclass(frozen=True)
class Mem:
    """The membership formula: ``term`` exists at least to degree ``level``."""

    level: FrameElement
    term: Term

    def __str__(self) -> str:
        return f"mem {quote(self.level.name)} {self.term}"


Formula = Union[Eq, Mem]


def formula_key(phi: Formula) -> tuple:
    if isinstance(phi, Eq):
        return (0, term_key(phi.lhs), term_key(phi.rhs))
    return (1, phi.level.id, term_key(phi.term))


def formula_terms(phi: Formula) -> tuple[Term, ...]:
    return (phi.lhs, phi.rhs) if isinstance(phi, Eq) else (phi.term,)


def formula_vars(phi: Formula) -> frozenset[str]:
    return frozenset().union(*(variables_of(t) for t in formula_terms(phi)))


def subst_formula(phi: Formula, sigma) -> Formula:
    if isinstance(phi, Eq):
        return Eq(substitute(phi.lhs, sigma), substitute(phi.rhs, sigma))
    return Mem(phi.level, substitute(phi.term, sigma))


def map_formula(phi: Formula, F: LanguageMorphism) -> Formula:
    if isinstance(phi, Eq):
        return Eq(F.map_term(phi.lhs), F.map_term(phi.rhs))
    return Mem(phi.level, F.map_term(phi.term))


def validate_formula(phi: Formula, lang: Language, frame: Frame) -> Formula:
    if isinstance(phi, Eq):
        validate_term(phi.lhs, lang)
        validate_term(phi.rhs, lang)
    elif isinstance(phi, Mem):
        frame.own(phi.level)
        validate_term(phi.term, lang)
    else:
        raise TypeError(f"not a formula: {phi!r}")
    return phi


@dataclass(frozen=True)
class Sequent:
    premises: frozenset
    conclusion: Formula

    def __post_init__(self):
        object.__setattr__(self, "premises", frozenset(self.premises))

    def sorted_premises(self) -> list[Formula]:
        return sorted(self.premises, key=formula_key)

    def variables(self) -> frozenset[str]:
        out = formula_vars(self.conclusion)
        for p in self.premises:
            out |= formula_vars(p)
        return out

    def constants(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for phi in self.formulas():
            for t in formula_terms(phi):
                out |= constants_of(t)
        return out

    def formulas(self) -> Iterable[Formula]:
        yield from self.sorted_premises()
        yield self.conclusion

    def __str__(self) -> str:
        prem = ", ".join(str(p) for p in self.sorted_premises())
        return f"[{prem}] |- {self.conclusion}" if prem else f"|- {self.conclusion}"


def subst_sequent(s: Sequent, sigma) -> Sequent:
    return Sequent(frozenset(subst_formula(p, sigma) for p in s.premises),
                   subst_formula(s.conclusion, sigma))


def map_sequent(s: Sequent, F: LanguageMorphism) -> Sequent:
    return Sequent(frozenset(map_formula(p, F) for p in s.premises), map_formula(s.conclusion, F))


def validate_sequent(s: Sequent, lang: Language, frame: Frame) -> Sequent:
    for phi in s.formulas():
        validate_formula(phi, lang, frame)
    return s


class Theory:
    """A language, a frame and a finite ordered set of axioms."""

    def __init__(self, language: Language, frame: Frame, axioms: Iterable[Sequent] = (),
                 name: str = ""):
        self.language = language
        self.frame = frame
        self.axioms = tuple(dict.fromkeys(axioms))
        self.name = name
        for ax in self.axioms:
            validate_sequent(ax, language, frame)
        self._index = {ax: i for i, ax in enumerate(self.axioms)}

    @property
    def signature(self):
        return self.language.signature

    def __eq__(self, other) -> bool:
        return (isinstance(other, Theory) and self.language == other.language
                and self.frame == other.frame and set(self.axioms) == set(other.axioms))

    def __hash__(self) -> int:
        return hash((self.language, self.frame, frozenset(self.axioms)))

    def __repr__(self) -> str:
        return f"Theory({self.name or '?'}: {len(self.axioms)} axioms over {self.frame.name})"

    def __contains__(self, s: Sequent) -> bool:
        return s in self._index

    def index_of(self, s: Sequent) -> int | None:
        return self._index.get(s)

    def with_axioms(self, extra: Iterable[Sequent], name: str | None = None) -> Theory:
        return Theory(self.language, self.frame, self.axioms + tuple(extra),
                      self.name if name is None else name)

    def issubset(self, other: Theory) -> bool:
        return set(self.axioms) <= set(other.axioms)

    def is_ground(self) -> bool:
        return all(not ax.variables() for ax in self.axioms)


# ---------------------------------------------------------------- transport

def transport_forward(theory: Theory, F: LanguageMorphism) -> Theory:
    """Image of the axioms under the sequent translation."""
    if F.source != theory.language:
        raise ValueError("morphism source differs from the theory's language")
    return Theory(F.target, theory.frame, (map_sequent(s, F) for s in theory.axioms))


def preimage_formula(phi: Formula, F: LanguageMorphism) -> list[Formula]:
    if isinstance(phi, Eq):
        return [Eq(a, b) for a, b in product(F.preimage_term(phi.lhs), F.preimage_term(phi.rhs))]
    return [Mem(phi.level, t) for t in F.preimage_term(phi.term)]


def preimage_sequent(s: Sequent, F: LanguageMorphism) -> list[Sequent]:
    concls = preimage_formula(s.conclusion, F)
    if not concls:
        return []
    # each target premise needs a non-empty set of preimages
    per_premise = []
    for p in s.sorted_premises():
        pre = preimage_formula(p, F)
        if not pre:
            return []
        subsets = [frozenset(c for k, c in enumerate(pre) if mask >> k & 1)
                   for mask in range(1, 1 << len(pre))]
        per_premise.append(subsets)
    out = []
    for choice in product(*per_premise):
        gamma = frozenset().union(*choice)
        for c in concls:
            out.append(Sequent(gamma, c))
    return list(dict.fromkeys(out))


def transport_backward(theory: Theory, F: LanguageMorphism) -> Theory:
    """All source sequents whose translation is an axiom of ``theory``."""
    if F.target != theory.language:
        raise ValueError("morphism target differs from the theory's language")
    axioms = []
    for s in theory.axioms:
        axioms.extend(preimage_sequent(s, F))
    return Theory(F.source, theory.frame, axioms)


# ---------------------------------------------------------------- extensions

def extend_with_formulas(theory: Theory, gamma: Iterable[Formula], name: str | None = None) -> Theory:
    """Add ``|- phi`` for each phi; existing axiom indices are kept."""
    gamma = sorted(set(gamma), key=formula_key)
    for phi in gamma:
        validate_formula(phi, theory.language, theory.frame)
    return theory.with_axioms((Sequent(frozenset(), phi) for phi in gamma), name=name)


def extend_with_fuzzy_set(theory: Theory, M: FuzzySet) -> tuple[Theory, LanguageMorphism]:
    """Add one constant per element of M with the axiom ``|- mem mu(m) m``."""
    if M.frame != theory.frame:
        raise ValueError("fuzzy set and theory use different frames")
    names = sorted(M)
    clash = set(names) & theory.language.names()
    if clash:
        raise NameClash(f"fuzzy set elements clash with existing names: {sorted(clash)}")
    lang = theory.language.with_constants(names)
    inc = LanguageMorphism.inclusion(theory.language, lang)
    axioms = [map_sequent(s, inc) for s in theory.axioms]
    axioms += [Sequent(frozenset(), Mem(M[m], Const(m))) for m in names]
    label = f"{theory.name}[M]" if theory.name else ""
    return Theory(lang, theory.frame, axioms, name=label), inc


# ---------------------------------------------------------------- classification

@dataclass(frozen=True)
class Classification:
    label: str                       # unconditional, type_E, basic or general
    witness: Sequent | None = None   # first axiom blocking the next stronger class


def _basic_formula(phi: Formula) -> bool:
    return all(isinstance(t, Var) for t in formula_terms(phi))


def _type_e_formula(phi: Formula) -> bool:
    return isinstance(phi, Mem) and isinstance(phi.term, Var)


def classify_theory(theory: Theory) -> Classification:
    tests = [
        ("unconditional", lambda s: not s.premises),
        ("type_E", lambda s: all(_type_e_formula(p) for p in s.premises)),
        ("basic", lambda s: all(_basic_formula(p) for p in s.premises)),
    ]
    witness = None
    for label, ok in tests:
        bad = next((s for s in theory.axioms if not ok(s)), None)
        if bad is None:
            return Classification(label, witness)
        witness = bad
    return Classification("general", witness)


# ---------------------------------------------------------------- parsing

def parse_formula_at(cur: Cursor, lang: Language, frame: Frame,
                     levels: dict[str, FrameElement] | None = None) -> Formula:
    if cur.at("mem") and not cur.peek().text == "(":
        cur.advance()
        tok = cur.name("level")
        level = _level(tok, frame, levels)
        return Mem(level, parse_term_at(cur, lang))
    lhs = parse_term_at(cur, lang)
    cur.expect("==")
    return Eq(lhs, parse_term_at(cur, lang))


def _level(tok, frame: Frame, levels: dict[str, FrameElement] | None) -> FrameElement:
    if levels and tok.text in levels:
        return levels[tok.text]
    try:
        return frame[tok.text]
    except KeyError:
        raise ParseError(f"unknown level {tok.text!r} in frame {frame.name}", tok.line, tok.col) from None


def parse_sequent_at(cur: Cursor, lang: Language, frame: Frame,
                     levels: dict[str, FrameElement] | None = None) -> Sequent:
    premises = []
    if cur.accept("["):
        if not cur.at("]"):
            premises.append(parse_formula_at(cur, lang, frame, levels))
            while cur.accept(","):
                premises.append(parse_formula_at(cur, lang, frame, levels))
        cur.expect("]")
    elif not cur.at("|-"):
        premises.append(parse_formula_at(cur, lang, frame, levels))
        while cur.accept(","):
            premises.append(parse_formula_at(cur, lang, frame, levels))
    cur.expect("|-")
    return Sequent(frozenset(premises), parse_formula_at(cur, lang, frame, levels))


def _parse_whole(text: str, fn, *args):
    cur = Cursor(tokenize(text))
    out = fn(cur, *args)
    if cur.tok.kind != "eof":
        raise cur.error(f"trailing input {cur.tok.text!r}")
    return out


def parse_formula(text: str, lang: Language, frame: Frame) -> Formula:
    return _parse_whole(text, parse_formula_at, lang, frame)


def parse_sequent(text: str, lang: Language, frame: Frame) -> Sequent:
    return _parse_whole(text, parse_sequent_at, lang, frame)


__all__ = [
    "App", "Classification", "Const", "Eq", "Formula", "Mem", "Sequent", "Theory", "Var",
    "classify_theory", "extend_with_formulas", "extend_with_fuzzy_set", "formula_key",
    "formula_terms", "formula_vars", "map_formula", "map_sequent", "parse_formula",
    "parse_formula_at", "parse_sequent", "parse_sequent_at", "preimage_sequent",
    "subst_formula", "subst_sequent", "transport_backward", "transport_forward",
    "validate_formula", "validate_sequent",
]
