"""Rule applications, derivation trees and small builders for them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..frame import FrameElement
from ..logic import Eq, Formula, Mem, Sequent, subst_sequent
from ..syntax import App, Substitution, Term


@dataclass(frozen=True)
class A:
    pass


@dataclass(frozen=True)
class Weak:
    delta: frozenset


@dataclass(frozen=True)
class Cut:
    phis: tuple


@dataclass(frozen=True)
class Refl:
    pass


@dataclass(frozen=True)
class Sym:
    pass


@dataclass(frozen=True)
class Trans:
    pass


@dataclass(frozen=True)
class Sub:
    sigma: Substitution


@dataclass(frozen=True)
class Cong:
    op: str


@dataclass(frozen=True)
class Inf:
    pass


@dataclass(frozen=True)
class Mon:
    level: FrameElement


@dataclass(frozen=True)
class Exp:
    op: str


@dataclass(frozen=True)
class Sup:
    levels: tuple


@dataclass(frozen=True)
class Fun:
    pass


@dataclass(frozen=True)
class Axiom:
    index: int | None = None


Rule = A | Weak | Cut | Refl | Sym | Trans | Sub | Cong | Inf | Mon | Exp | Sup | Fun | Axiom

RULES = {cls.__name__: cls for cls in (A, Weak, Cut, Refl, Sym, Trans, Sub, Cong, Inf, Mon,
                                       Exp, Sup, Fun, Axiom)}


def rule_name(rule: Rule) -> str:
    return type(rule).__name__


@dataclass(frozen=True)
class Derivation:
    """A tree of rule applications; subtrees may be shared."""

    conclusion: Sequent
    rule: Rule
    premises: tuple = ()
    _hash: list = field(default_factory=list, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def __hash__(self) -> int:
        if not self._hash:
            self._hash.append(hash((self.conclusion, self.rule, self.premises)))
        return self._hash[0]

    def nodes(self) -> list[tuple[tuple[int, ...], Derivation]]:
        """All (path, node) pairs in pre-order."""
        out = []
        stack = [((), self)]
        while stack:
            path, node = stack.pop()
            out.append((path, node))
            for i in reversed(range(len(node.premises))):
                stack.append((path + (i,), node.premises[i]))
        return out

    def at(self, path: Sequence[int]) -> Derivation:
        node = self
        for i in path:
            node = node.premises[i]
        return node

    def replace(self, path: Sequence[int], new: Derivation) -> Derivation:
        if not path:
            return new
        i = path[0]
        prem = list(self.premises)
        prem[i] = prem[i].replace(path[1:], new)
        return Derivation(self.conclusion, self.rule, tuple(prem))

    def depth(self) -> int:
        memo: dict[int, int] = {}

        def go(d: Derivation) -> int:
            k = id(d)
            if k not in memo:
                memo[k] = 1 + max((go(p) for p in d.premises), default=-1)
            return memo[k]
        return go(self)

    def size(self) -> int:
        return len(self.nodes())

    def uses(self, cls) -> bool:
        seen = set()
        stack = [self]
        while stack:
            d = stack.pop()
            if id(d) in seen:
                continue
            seen.add(id(d))
            if isinstance(d.rule, cls):
                return True
            stack.extend(d.premises)
        return False


def format_path(path: Sequence[int]) -> str:
    return ".".join(["root", *map(str, path)])


# ---------------------------------------------------------------- builders
# Each builder computes the conclusion its rule licenses; validity is left to
# the checker.

def _eq(d: Derivation) -> Eq:
    c = d.conclusion.conclusion
    if not isinstance(c, Eq):
        raise TypeError(f"expected an equation, got {c}")
    return c


def _mem(d: Derivation) -> Mem:
    c = d.conclusion.conclusion
    if not isinstance(c, Mem):
        raise TypeError(f"expected a membership formula, got {c}")
    return c


def axiom(theory, index: int) -> Derivation:
    return Derivation(theory.axioms[index], Axiom(index))


def assume(gamma: Iterable[Formula], phi: Formula) -> Derivation:
    return Derivation(Sequent(frozenset(gamma), phi), A())


def weak(d: Derivation, delta: Iterable[Formula]) -> Derivation:
    delta = frozenset(delta)
    s = d.conclusion
    return Derivation(Sequent(s.premises | delta, s.conclusion), Weak(delta), (d,))


def widen(d: Derivation, gamma: Iterable[Formula]) -> Derivation:
    """Weak up to exactly ``gamma`` premises, or ``d`` itself if nothing is missing."""
    gamma = frozenset(gamma)
    extra = gamma - d.conclusion.premises
    return weak(d, extra) if extra else d


def cut(supports: Sequence[Derivation], main: Derivation) -> Derivation:
    phis = tuple(s.conclusion.conclusion for s in supports)
    gamma = supports[0].conclusion.premises if supports else frozenset()
    return Derivation(Sequent(gamma, main.conclusion.conclusion), Cut(phis), (*supports, main))


def refl(gamma: Iterable[Formula], t: Term) -> Derivation:
    return Derivation(Sequent(frozenset(gamma), Eq(t, t)), Refl())


def sym(d: Derivation) -> Derivation:
    e = _eq(d)
    return Derivation(Sequent(d.conclusion.premises, Eq(e.rhs, e.lhs)), Sym(), (d,))


def trans(d1: Derivation, d2: Derivation) -> Derivation:
    e1, e2 = _eq(d1), _eq(d2)
    return Derivation(Sequent(d1.conclusion.premises, Eq(e1.lhs, e2.rhs)), Trans(), (d1, d2))


def chain(steps: Iterable[Derivation | None], gamma=frozenset(), start: Term | None = None) -> Derivation | None:
    """Fold equations ``t0=t1, t1=t2, ...`` with Trans, skipping ``None`` entries."""
    steps = [s for s in steps if s is not None]
    if not steps:
        return refl(gamma, start) if start is not None else None
    acc = steps[0]
    for s in steps[1:]:
        acc = trans(acc, s)
    return acc


def sub(d: Derivation, sigma) -> Derivation:
    sigma = sigma if isinstance(sigma, Substitution) else Substitution(sigma)
    return Derivation(subst_sequent(d.conclusion, sigma), Sub(sigma), (d,))


def cong(op: str, ds: Sequence[Derivation]) -> Derivation:
    eqs = [_eq(d) for d in ds]
    gamma = ds[0].conclusion.premises
    concl = Eq(App(op, tuple(e.lhs for e in eqs)), App(op, tuple(e.rhs for e in eqs)))
    return Derivation(Sequent(gamma, concl), Cong(op), tuple(ds))


def inf(gamma: Iterable[Formula], t: Term, frame) -> Derivation:
    return Derivation(Sequent(frozenset(gamma), Mem(frame.bottom, t)), Inf())


def mon(d: Derivation, level: FrameElement) -> Derivation:
    m = _mem(d)
    return Derivation(Sequent(d.conclusion.premises, Mem(m.level & level, m.term)), Mon(level), (d,))


def exp(op: str, ds: Sequence[Derivation], frame) -> Derivation:
    ms = [_mem(d) for d in ds]
    gamma = ds[0].conclusion.premises
    concl = Mem(frame.inf_of(m.level for m in ms), App(op, tuple(m.term for m in ms)))
    return Derivation(Sequent(gamma, concl), Exp(op), tuple(ds))


def sup(ds: Sequence[Derivation], frame, term: Term | None = None, gamma=frozenset()) -> Derivation:
    ms = [_mem(d) for d in ds]
    if ds:
        term, gamma = ms[0].term, ds[0].conclusion.premises
    levels = tuple(m.level for m in ms)
    return Derivation(Sequent(gamma, Mem(frame.sup_of(levels), term)), Sup(levels), tuple(ds))


def fun(d_eq: Derivation, d_mem: Derivation) -> Derivation:
    e, m = _eq(d_eq), _mem(d_mem)
    return Derivation(Sequent(d_mem.conclusion.premises, Mem(m.level, e.rhs)), Fun(), (d_eq, d_mem))
