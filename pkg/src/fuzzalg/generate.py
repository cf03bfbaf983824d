"""Seeded random frames, algebras, terms, theories and valid derivations."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

import numpy as np

from .algebra import FuzzyAlgebra
from .frame import Frame, boolean, chain
from .logic import Eq, Mem, Sequent, Theory, formula_vars
from .proof.derivation import (Derivation, assume, axiom, cong, cut, exp, fun, inf, mon, refl,
                               sub, sup, sym, trans, weak)
from .semantics import sequent_violation
from .syntax import App, Const, Language, Signature, Substitution, Term, Var


def small_frames(max_size: int = 4) -> list[Frame]:
    """Every finite distributive lattice with at most ``max_size`` (<= 4) elements."""
    out = [chain(n) for n in range(1, max_size + 1)]
    if max_size >= 4:
        out.append(boolean(2))
    return out


def random_frame(rng: random.Random, max_size: int = 4, min_size: int = 2) -> Frame:
    return rng.choice([f for f in small_frames(max_size) if len(f) >= min_size])


def random_signature(rng: random.Random, max_ops: int = 2, max_consts: int = 1) -> Signature:
    names = ["f", "g"][:rng.randint(1, max_ops)]
    ops = {f: rng.choice((1, 2)) for f in names}
    consts = ["c", "d"][:rng.randint(0, max_consts)]
    return Signature(ops, frozenset(consts))


def raise_levels(frame: Frame, ops: dict[str, np.ndarray], mu: list[int]) -> list[int]:
    """Least levels above ``mu`` (as ids) making every operation compatible."""
    mu = list(mu)
    n = len(mu)
    changed = True
    while changed:
        changed = False
        for f, tab in ops.items():
            for args in product(range(n), repeat=tab.ndim):
                lo = frame.top.id
                for a in args:
                    lo = int(frame.meet_table[lo, mu[a]])
                r = int(tab[args])
                new = int(frame.join_table[mu[r], lo])
                if new != mu[r]:
                    mu[r] = new
                    changed = True
    return mu


def random_algebra(rng: random.Random, signature: Signature, frame: Frame,
                   max_size: int = 4, min_size: int = 1, name: str = "") -> FuzzyAlgebra:
    n = rng.randint(max(min_size, 1 if signature.consts else 0), max_size)
    ops = {f: np.array([rng.randrange(n) for _ in range(n ** k)], dtype=np.int64).reshape((n,) * k)
           for f, k in signature.ops} if n else {f: np.zeros((0,) * k, dtype=np.int64)
                                                 for f, k in signature.ops}
    mu = raise_levels(frame, ops, [rng.randrange(len(frame)) for _ in range(n)])
    consts = {c: rng.randrange(n) for c in signature.consts}
    return FuzzyAlgebra(signature, frame, [f"a{i}" for i in range(n)],
                        [frame.elements[i] for i in mu], ops, consts, name=name)


def random_term(rng: random.Random, lang: Language, depth: int, variables=None) -> Term:
    variables = list(lang.variables if variables is None else variables)
    leaves = [Var(x) for x in variables] + [Const(c) for c in sorted(lang.signature.consts)]
    ops = list(lang.signature.ops)
    if depth <= 0 or not ops or (leaves and rng.random() < 0.3):
        if not leaves:
            raise ValueError("no leaves to build terms from")
        return rng.choice(leaves)
    f, k = rng.choice(ops)
    return App(f, tuple(random_term(rng, lang, depth - 1, variables) for _ in range(k)))


def random_formula(rng: random.Random, lang: Language, frame: Frame, depth: int = 2,
                   variables=None):
    if rng.random() < 0.5:
        return Eq(random_term(rng, lang, depth, variables), random_term(rng, lang, depth, variables))
    return Mem(rng.choice(frame.elements), random_term(rng, lang, depth, variables))


def random_sequent(rng: random.Random, lang: Language, frame: Frame, depth: int = 2,
                   max_premises: int = 2, variables=None) -> Sequent:
    k = rng.randint(0, max_premises)
    prem = frozenset(random_formula(rng, lang, frame, depth, variables) for _ in range(k))
    return Sequent(prem, random_formula(rng, lang, frame, depth, variables))


def theory_satisfied_by(rng: random.Random, A: FuzzyAlgebra, lang: Language,
                        n_axioms: int = 4, tries: int = 200, name: str = "") -> Theory:
    """Random axioms that hold in ``A``, so ``A`` is a model of the result."""
    axioms = []
    for _ in range(tries):
        if len(axioms) >= n_axioms:
            break
        s = random_sequent(rng, lang, A.frame)
        if sequent_violation(A, s) is None and not _trivial(s):
            axioms.append(s)
    return Theory(lang, A.frame, axioms, name=name)


def _trivial(s: Sequent) -> bool:
    c = s.conclusion
    return c in s.premises or (isinstance(c, Eq) and c.lhs == c.rhs)


# ---------------------------------------------------------------- derivations

@dataclass
class DerivationConfig:
    max_depth: int = 6
    steps: int = 100
    allow_sub: bool = True
    term_depth: int = 2
    contexts: int = 2


class _Pool:
    def __init__(self):
        self.items: list[Derivation] = []
        self.depths: dict[int, int] = {}
        self.seen: set = set()

    def add(self, d: Derivation) -> None:
        if d.conclusion in self.seen:
            return
        self.seen.add(d.conclusion)
        self.items.append(d)
        self.depths[id(d)] = 1 + max((self.depths[id(p)] for p in d.premises), default=-1)

    def depth(self, d: Derivation) -> int:
        return self.depths[id(d)]

    def by_context(self, gamma) -> list[Derivation]:
        return [d for d in self.items if d.conclusion.premises == gamma]


def random_derivation(rng: random.Random, theory: Theory, config: DerivationConfig | None = None
                      ) -> Derivation:
    """A derivation from ``theory`` built bottom-up from valid rule applications.

    Leaves are axioms, assumptions, Refl and Inf; inner nodes combine pool
    members with matching contexts, so every node is correct by construction.
    """
    cfg = config or DerivationConfig()
    lang, frame = theory.language, theory.frame
    pool = _Pool()
    contexts = [frozenset()]
    for _ in range(cfg.contexts):
        gamma = frozenset(random_formula(rng, lang, frame, 1) for _ in range(rng.randint(1, 2)))
        contexts.append(gamma)
    for i in range(len(theory.axioms)):
        pool.add(axiom(theory, i))
    for gamma in contexts:
        for phi in sorted(gamma, key=str):
            pool.add(assume(gamma, phi))
        t = random_term(rng, lang, cfg.term_depth)
        pool.add(refl(gamma, t))
        pool.add(inf(gamma, random_term(rng, lang, cfg.term_depth), frame))

    def ok(*ds) -> bool:
        return all(pool.depth(d) < cfg.max_depth for d in ds)

    def eqs(ctx=None):
        return [d for d in pool.items if isinstance(d.conclusion.conclusion, Eq)
                and (ctx is None or d.conclusion.premises == ctx) and ok(d)]

    def mems(ctx=None):
        return [d for d in pool.items if isinstance(d.conclusion.conclusion, Mem)
                and (ctx is None or d.conclusion.premises == ctx) and ok(d)]

    moves = ["sym", "trans", "cong", "mon", "exp", "sup", "fun", "weak", "cut", "refl", "leaf"]
    if cfg.allow_sub:
        moves.append("sub")
    for _ in range(cfg.steps):
        move = rng.choice(moves)
        made = None
        if move == "sym":
            c = eqs()
            if c:
                made = sym(rng.choice(c))
        elif move == "trans":
            c = eqs()
            rng.shuffle(c)
            for d1 in c[:20]:
                mid = d1.conclusion.conclusion.rhs
                partners = [d2 for d2 in eqs(d1.conclusion.premises)
                            if d2.conclusion.conclusion.lhs == mid]
                if partners:
                    made = trans(d1, rng.choice(partners))
                    break
        elif move == "cong":
            f, k = rng.choice(list(lang.signature.ops))
            c = eqs()
            if c:
                ctx = rng.choice(c).conclusion.premises
                same = eqs(ctx)
                made = cong(f, [rng.choice(same) for _ in range(k)])
        elif move == "mon":
            c = mems()
            if c:
                made = mon(rng.choice(c), rng.choice(frame.elements))
        elif move == "exp":
            f, k = rng.choice(list(lang.signature.ops))
            c = mems()
            if c:
                ctx = rng.choice(c).conclusion.premises
                same = mems(ctx)
                made = exp(f, [rng.choice(same) for _ in range(k)], frame)
        elif move == "sup":
            c = mems()
            if c:
                d0 = rng.choice(c)
                term, ctx = d0.conclusion.conclusion.term, d0.conclusion.premises
                by_level = {}
                for d in mems(ctx):
                    if d.conclusion.conclusion.term == term:
                        by_level.setdefault(d.conclusion.conclusion.level, d)
                picked = rng.sample(list(by_level.values()), rng.randint(1, len(by_level)))
                made = sup(picked, frame)
        elif move == "fun":
            c = mems()
            rng.shuffle(c)
            for dm in c[:20]:
                term = dm.conclusion.conclusion.term
                partners = [de for de in eqs(dm.conclusion.premises)
                            if de.conclusion.conclusion.lhs == term]
                if partners:
                    made = fun(rng.choice(partners), dm)
                    break
        elif move == "weak":
            c = [d for d in pool.items if ok(d)]
            target = rng.choice(contexts)
            d = rng.choice(c)
            if d.conclusion.premises < target or (not d.conclusion.premises and target):
                extra = target - d.conclusion.premises
                if extra:
                    made = weak(d, extra)
        elif move == "cut":
            mains = [d for d in pool.items if d.conclusion.premises and ok(d)]
            if mains:
                main = rng.choice(mains)
                phis = sorted(main.conclusion.premises, key=str)
                for gamma in rng.sample(contexts, len(contexts)):
                    supports = []
                    for phi in phis:
                        have = [d for d in pool.items if d.conclusion.premises == gamma
                                and d.conclusion.conclusion == phi and ok(d)]
                        if not have:
                            break
                        supports.append(rng.choice(have))
                    else:
                        made = cut(supports, main)
                        break
        elif move == "refl":
            made = refl(rng.choice(contexts), random_term(rng, lang, cfg.term_depth))
        elif move == "leaf":
            gamma = rng.choice(contexts)
            if gamma:
                made = assume(gamma, rng.choice(sorted(gamma, key=str)))
        elif move == "sub":
            c = [d for d in pool.items if ok(d) and d.conclusion.variables()]
            if c:
                d = rng.choice(c)
                xs = sorted(d.conclusion.variables())
                x = rng.choice(xs)
                sigma = Substitution({x: random_term(rng, lang, 1)})
                made = sub(d, sigma)
                contexts.append(made.conclusion.premises)
        if made is not None:
            pool.add(made)
    inner = [d for d in pool.items if d.premises]
    candidates = inner or pool.items
    best = max(pool.depth(d) for d in candidates)
    deep = [d for d in candidates if pool.depth(d) >= best - 1]
    return rng.choice(deep)


def subdivide_context(rng: random.Random, s: Sequent) -> tuple[frozenset, frozenset]:
    """Split the premises into a part to move into the theory and the rest."""
    prem = sorted(s.premises, key=str)
    gamma = frozenset(p for p in prem if rng.random() < 0.6)
    return gamma, s.premises - gamma


def ground_formulas_vars(phi) -> bool:
    return not formula_vars(phi)


__all__ = [
    "DerivationConfig", "random_algebra", "random_derivation", "random_formula", "random_frame",
    "random_sequent", "random_signature", "random_term", "raise_levels", "small_frames",
    "subdivide_context", "theory_satisfied_by",
]
