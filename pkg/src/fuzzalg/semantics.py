"""Satisfaction, model search, term models and free models."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .algebra import FuzzyAlgebra, enumerate_algebras
from .frame import FrameElement, FuzzySet
from .logic import Eq, Formula, Mem, Sequent, Theory, extend_with_fuzzy_set
from .proof.saturate import BudgetExhausted, Closure
from .syntax import App, Const, Term, Var


class UnboundVariable(KeyError):
    pass


def eval_term(A: FuzzyAlgebra, t: Term, assignment: Mapping[str, int | str] = {}) -> int:
    """Value of ``t`` as a carrier index."""
    if isinstance(t, Var):
        if t.name not in assignment:
            raise UnboundVariable(t.name)
        v = assignment[t.name]
        return A.index(v) if isinstance(v, str) else int(v)
    if isinstance(t, Const):
        return A.consts[t.name]
    return A.apply(t.op, [eval_term(A, a, assignment) for a in t.args])


def satisfies(A: FuzzyAlgebra, phi: Formula, assignment: Mapping[str, int | str] = {}) -> bool:
    if isinstance(phi, Eq):
        return eval_term(A, phi.lhs, assignment) == eval_term(A, phi.rhs, assignment)
    v = eval_term(A, phi.term, assignment)
    return phi.level <= A.mu[v]


# ---------------------------------------------------------------- vectorised checks

def _eval_vec(A: FuzzyAlgebra, t: Term, env: dict[str, np.ndarray], shape: int) -> np.ndarray:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        return np.full(shape, A.consts[t.name], dtype=np.int64)
    args = tuple(_eval_vec(A, a, env, shape) for a in t.args)
    return A.ops[t.op][args]


def _holds_vec(A: FuzzyAlgebra, phi: Formula, env, shape: int, cache) -> np.ndarray:
    def ev(t):
        if t not in cache:
            cache[t] = _eval_vec(A, t, env, shape)
        return cache[t]
    if isinstance(phi, Eq):
        return ev(phi.lhs) == ev(phi.rhs)
    return A.frame.leq_table[phi.level.id, A.mu_idx[ev(phi.term)]]


def sequent_violation(A: FuzzyAlgebra, s: Sequent) -> dict[str, int] | None:
    """First assignment of the sequent's variables under which it fails, if any."""
    vs = sorted(s.variables())
    n = A.size
    if vs and n == 0:
        return None
    k = len(vs)
    shape = n ** k
    grid = np.indices((n,) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=np.int64)
    env = {x: grid[i] for i, x in enumerate(vs)}
    cache: dict[Term, np.ndarray] = {}
    ok = np.ones(shape, dtype=bool)
    for p in s.premises:
        ok &= _holds_vec(A, p, env, shape, cache)
        if not ok.any():
            return None
    bad = ok & ~_holds_vec(A, s.conclusion, env, shape, cache)
    if not bad.any():
        return None
    j = int(np.argmax(bad))
    return {x: int(grid[i, j]) for i, x in enumerate(vs)}


def satisfies_sequent(A: FuzzyAlgebra, s: Sequent) -> bool:
    return sequent_violation(A, s) is None


def model_violation(A: FuzzyAlgebra, theory: Theory) -> tuple[Sequent, dict[str, int]] | None:
    for ax in theory.axioms:
        bad = sequent_violation(A, ax)
        if bad is not None:
            return ax, bad
    return None


def is_model(A: FuzzyAlgebra, theory: Theory) -> bool:
    if A.frame != theory.frame:
        return False
    return model_violation(A, theory) is None


def model_mask(algebras: Sequence[FuzzyAlgebra], theory: Theory) -> np.ndarray:
    """``is_model`` for many algebras at once; same-size algebras are evaluated together."""
    out = np.zeros(len(algebras), dtype=bool)
    groups: dict[int, list[int]] = {}
    for i, A in enumerate(algebras):
        if A.frame != theory.frame:
            continue
        if A.signature == theory.signature:
            groups.setdefault(A.size, []).append(i)
        else:
            out[i] = is_model(A, theory)
    leq = theory.frame.leq_table
    for n, idx in groups.items():
        m = len(idx)
        if n == 0:
            for i in idx:
                out[i] = is_model(algebras[i], theory)
            continue
        ops = {f: np.stack([algebras[i].ops[f] for i in idx]) for f, _ in theory.signature.ops}
        consts = {c: np.array([algebras[i].consts[c] for i in idx]) for c in theory.signature.consts}
        mu = np.stack([algebras[i].mu_idx for i in idx])
        rows = np.arange(m)[:, None]
        ok = np.ones(m, dtype=bool)
        for ax in theory.axioms:
            vs = sorted(ax.variables())
            k = len(vs)
            grid = np.indices((n,) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=np.int64)
            g = grid.shape[1]
            env = {x: np.broadcast_to(grid[j], (m, g)) for j, x in enumerate(vs)}
            cache: dict[Term, np.ndarray] = {}

            def ev(t: Term) -> np.ndarray:
                if t not in cache:
                    if isinstance(t, Var):
                        cache[t] = env[t.name]
                    elif isinstance(t, Const):
                        cache[t] = np.broadcast_to(consts[t.name][:, None], (m, g))
                    else:
                        cache[t] = ops[t.op][(rows, *(ev(a) for a in t.args))]
                return cache[t]

            def holds(phi) -> np.ndarray:
                if isinstance(phi, Eq):
                    return ev(phi.lhs) == ev(phi.rhs)
                return leq[phi.level.id, np.take_along_axis(mu, ev(phi.term), axis=1)]

            good = np.ones((m, g), dtype=bool)
            for p in ax.premises:
                good &= holds(p)
            ok &= ~(good & ~holds(ax.conclusion)).any(axis=1)
        out[idx] = ok
    return out


# ---------------------------------------------------------------- model search

def _equation_holds(ops: dict, consts: dict, n: int, ax: Sequent) -> bool:
    vs = sorted(ax.variables())
    k = len(vs)
    grid = np.indices((n,) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=np.int64)
    env = {x: grid[i] for i, x in enumerate(vs)}
    shape = grid.shape[1]

    def ev(t: Term) -> np.ndarray:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return np.full(shape, consts[t.name], dtype=np.int64)
        return ops[t.op][tuple(ev(a) for a in t.args)]
    c = ax.conclusion
    return bool(np.array_equal(ev(c.lhs), ev(c.rhs)))


def _equational_filters(theory: Theory):
    """Pruning predicates from the premise-free equations: one on tables, one with constants."""
    eqs = [ax for ax in theory.axioms if not ax.premises and isinstance(ax.conclusion, Eq)]
    plain = [ax for ax in eqs if not ax.constants()]
    rest = [ax for ax in eqs if ax.constants()]
    tables = (lambda ops, n: all(_equation_holds(ops, {}, n, ax) for ax in plain)) if plain else None
    full = (lambda ops, consts, n: all(_equation_holds(ops, consts, n, ax) for ax in rest)) \
        if rest else None
    return tables, full


def enumerate_models(theory: Theory, max_size: int, min_size: int = 0,
                     canonical_levels: bool = True) -> Iterator[FuzzyAlgebra]:
    """Models of ``theory`` up to ``max_size`` elements (every one up to isomorphism)."""
    tables, full = _equational_filters(theory)
    for A in enumerate_algebras(theory.signature, theory.frame, max_size, min_size,
                                structure_filter=full, table_filter=tables,
                                canonical_levels=canonical_levels):
        if model_violation(A, theory) is None:
            yield A


@dataclass(frozen=True)
class Countermodel:
    algebra: FuzzyAlgebra
    assignment: dict
    sequent: Sequent

    def named_assignment(self) -> dict[str, str]:
        return {x: self.algebra.carrier[v] for x, v in sorted(self.assignment.items())}


@dataclass(frozen=True)
class NoneUpTo:
    size: int


def find_countermodel(theory: Theory, s: Sequent, max_size: int,
                      models: Iterable[FuzzyAlgebra] | None = None) -> Countermodel | NoneUpTo:
    """The first model of ``theory`` (in enumeration order) refuting ``s``.

    ``models`` may supply a precomputed enumeration of the same models.
    """
    pool = enumerate_models(theory, max_size) if models is None else models
    for A in pool:
        if A.size > max_size:
            continue
        bad = sequent_violation(A, s)
        if bad is not None:
            return Countermodel(A, bad, s)
    return NoneUpTo(max_size)


# ---------------------------------------------------------------- term models

@dataclass
class TermModel:
    """Classes of ground terms reached by saturation, with their levels.

    A class is interior when its least representative has depth below the
    bound, so applying an operation to interior classes stays in range.  The
    model is closed when interior classes are closed under the operations;
    only then is ``algebra`` available.
    """

    theory: Theory
    depth: int
    reps: list[Term]
    levels: list[FrameElement]
    frontier: list[bool]
    sizes: list[int]
    tables: dict[str, dict[tuple[int, ...], int]]
    consts: dict[str, int]
    complete: bool
    closure: Closure | None = field(default=None, repr=False, compare=False)
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def interior(self) -> list[int]:
        return [i for i, f in enumerate(self.frontier) if not f]

    @property
    def closed(self) -> bool:
        inside = set(self.interior)
        if not all(c in inside for c in self.consts.values()):
            return False
        return all(r in inside for tab in self.tables.values() for r in tab.values())

    def class_of(self, t: Term) -> int | None:
        if self.closure is None:
            lookup = {r: i for i, r in enumerate(self.reps)}
            return lookup.get(t)
        root = self.closure.class_of(t)
        if root is None:
            return None
        return self._index.get(root)

    @property
    def algebra(self) -> FuzzyAlgebra | None:
        if not self.closed:
            return None
        keep = self.interior
        pos = {c: i for i, c in enumerate(keep)}
        sig = self.theory.signature
        ops = {}
        for f, k in sig.ops:
            tab = np.zeros((len(keep),) * k, dtype=np.int64)
            for args, r in self.tables[f].items():
                tab[tuple(pos[a] for a in args)] = pos[r]
            ops[f] = tab
        return FuzzyAlgebra(sig, self.theory.frame, [str(self.reps[c]) for c in keep],
                            [self.levels[c] for c in keep], ops,
                            {c: pos[v] for c, v in self.consts.items()},
                            name=f"T({self.theory.name})")


def term_model_from_closure(cl: Closure) -> TermModel:
    roots = sorted(cl.classes(), key=lambda r: cl.rep[r])
    index = {r: i for i, r in enumerate(roots)}
    reps = [cl.terms[cl.rep[r]] for r in roots]
    frontier = [t.depth >= cl.depth for t in reps]
    tables: dict[str, dict[tuple[int, ...], int]] = {}
    interior = [i for i, f in enumerate(frontier) if not f]
    for f, k in cl.theory.signature.ops:
        tab = {}
        for args in product(interior, repeat=k):
            j = cl.locate(App(f, tuple(reps[a] for a in args)))
            if j is not None:
                tab[args] = index[cl.find(j)]
        tables[f] = tab
    consts = {t.name: index[cl.find(i)] for i, t in enumerate(cl.terms) if isinstance(t, Const)}
    return TermModel(cl.theory, cl.depth, reps, [cl.level[r] for r in roots], frontier,
                     [len(cl.members[r]) for r in roots], tables, consts, cl.complete, cl, index)


def term_model(theory: Theory, depth: int, max_steps: int = 1_000_000) -> TermModel:
    """Quotient of the ground terms by derivable equality, up to the depth bound."""
    try:
        cl = Closure(theory, depth).run(max_steps)
    except BudgetExhausted as exc:
        if exc.partial is not None:
            exc.partial_model = term_model_from_closure(exc.partial)
        raise
    return term_model_from_closure(cl)


@dataclass
class FreeModel:
    model: TermModel
    theory: Theory          # the theory with one constant per generator
    generators: FuzzySet
    unit: dict[str, int]    # generator -> class index

    def unit_level(self, m: str) -> FrameElement:
        return self.model.levels[self.unit[m]]


def free_model(theory: Theory, M: FuzzySet, depth: int, max_steps: int = 1_000_000) -> FreeModel:
    ext, _ = extend_with_fuzzy_set(theory, M)
    tm = term_model(ext, depth, max_steps=max_steps)
    unit = {m: tm.class_of(Const(m)) for m in M}
    return FreeModel(tm, ext, M, unit)
