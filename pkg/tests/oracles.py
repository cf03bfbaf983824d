"""Brute-force reference implementations, written without the package's fast paths."""

from __future__ import annotations

from itertools import permutations, product

from fuzzalg.logic import Eq, Mem
from fuzzalg.syntax import App, Const, Var


def leq(frame, a, b) -> bool:
    return bool(frame.leq_table[a.id, b.id])


def brute_meet(frame, a, b):
    lower = [c for c in frame.elements if leq(frame, c, a) and leq(frame, c, b)]
    return next(c for c in lower if all(leq(frame, d, c) for d in lower))


def brute_join(frame, a, b):
    upper = [c for c in frame.elements if leq(frame, a, c) and leq(frame, b, c)]
    return next(c for c in upper if all(leq(frame, c, d) for d in upper))


def table(A, f):
    """The operation as a plain dict from argument tuples to results."""
    tab = A.ops[f]
    return {args: int(tab[args]) for args in product(range(A.size), repeat=tab.ndim)}


def evaluate(A, t, env):
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        return A.consts[t.name]
    return table(A, t.op)[tuple(evaluate(A, a, env) for a in t.args)]


def holds(A, phi, env) -> bool:
    if isinstance(phi, Eq):
        return evaluate(A, phi.lhs, env) == evaluate(A, phi.rhs, env)
    return leq(A.frame, phi.level, A.mu[evaluate(A, phi.term, env)])


def sequent_holds(A, s) -> bool:
    xs = sorted(s.variables())
    for vals in product(range(A.size), repeat=len(xs)):
        env = dict(zip(xs, vals))
        if all(holds(A, p, env) for p in s.premises) and not holds(A, s.conclusion, env):
            return False
    return True


def model_of(A, theory) -> bool:
    return all(sequent_holds(A, s) for s in theory.axioms)


def is_hom(A, B, m) -> bool:
    for c, a in A.consts.items():
        if m[a] != B.consts[c]:
            return False
    for f in A.ops:
        tb = table(B, f)
        for args, r in table(A, f).items():
            if m[r] != tb[tuple(m[a] for a in args)]:
                return False
    return all(leq(A.frame, A.mu[a], B.mu[m[a]]) for a in range(A.size))


def all_homs(A, B) -> list[tuple[int, ...]]:
    return [m for m in product(range(B.size), repeat=A.size) if is_hom(A, B, m)]


def isomorphic(A, B) -> bool:
    if A.size != B.size:
        return False
    for p in permutations(range(B.size)):
        if is_hom(A, B, p) and all(A.mu[a] == B.mu[p[a]] for a in range(A.size)):
            return True
    return False


class WordAlgebra:
    """Nonempty words over letters with concatenation; level = meet of letter levels."""

    def __init__(self, frame, letters: dict, max_len: int):
        self.frame = frame
        self.letters = letters
        self.words = [w for n in range(1, max_len + 1) for w in product(sorted(letters), repeat=n)]

    def level(self, w):
        acc = self.frame.top
        for ch in w:
            acc = brute_meet(self.frame, acc, self.letters[ch])
        return acc


def word_of(t) -> tuple[str, ...]:
    """Flatten a mul-term over constants to its word."""
    if isinstance(t, Const):
        return (t.name,)
    return word_of(t.args[0]) + word_of(t.args[1])
