"""Bounded forward saturation of a theory on ground terms.

The engine is a congruence closure over every ground term up to a depth
bound, extended with one level per class.  Equalities live in a union-find
with a proof forest; each forest edge and each level carries a derivation, so
every fact can be replayed through the checker.  Axioms are instantiated by
e-matching their terms against the current classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from ..frame import FrameElement
from ..logic import Eq, Formula, Mem, Sequent, Theory, formula_key, formula_terms, subst_sequent
from ..syntax import App, Const, Substitution, Term, Var, variables_of
from .derivation import (Derivation, axiom, chain, cong, cut, exp, fun, inf, mon, refl, sub, sup,
                         sym)


class BudgetExhausted(RuntimeError):
    def __init__(self, msg: str, partial: Closure | None = None):
        super().__init__(msg)
        self.partial = partial


class UniverseTooLarge(BudgetExhausted):
    pass


def ground_terms(signature, depth: int, limit: int | None = None) -> list[Term]:
    """Every ground term of depth at most ``depth``, sorted by the term order."""
    layers: list[list[Term]] = [[Const(c) for c in sorted(signature.consts)]]
    all_terms = list(layers[0])
    for k in range(1, depth + 1):
        older = [t for layer in layers[:-1] for t in layer]
        newest = layers[-1]
        upto = older + newest
        layer = []
        for f, n in signature.ops:
            for args in product(upto, repeat=n):
                if any(a.depth == k - 1 for a in args):
                    layer.append(App(f, args))
                    if limit is not None and len(all_terms) + len(layer) > limit:
                        raise UniverseTooLarge(f"more than {limit} ground terms up to depth {depth}")
        layers.append(layer)
        all_terms.extend(layer)
        if not layer:
            break
    all_terms.sort(key=lambda t: t._key)
    return all_terms


@dataclass
class _Edge:
    to: int
    deriv: Derivation
    forward: bool   # deriv proves this == to when True, to == this otherwise


class Closure:
    """The saturated state; query it with :meth:`prove` or inspect classes."""

    def __init__(self, theory: Theory, depth: int, max_terms: int = 200_000):
        self.theory = theory
        self.frame = theory.frame
        self.depth = depth
        self.terms = ground_terms(theory.signature, depth, limit=max_terms)
        self.tid = {t: i for i, t in enumerate(self.terms)}
        n = len(self.terms)
        self.parent = list(range(n))
        self.members = {i: [i] for i in range(n)}
        self.uses: dict[int, list[int]] = {i: [] for i in range(n)}
        self.sig: dict[tuple, int] = {}
        self.args: list[tuple[int, ...] | None] = [None] * n
        self.edges: list[_Edge | None] = [None] * n
        self.level = {i: self.frame.bottom for i in range(n)}
        self.best: dict[int, tuple[int, Derivation]] = {}
        self.rep = list(range(n))
        self._explain: dict[tuple[int, int], Derivation | None] = {}
        self._pending: list = []
        self.steps = 0
        self.complete = False
        self.changes = 0
        for i, t in enumerate(self.terms):
            if isinstance(t, App):
                a = tuple(self.tid[x] for x in t.args)
                self.args[i] = a
                self.sig[(t.op, a)] = i
                for j in set(a):
                    self.uses[j].append(i)

    # ------------------------------------------------------------ union-find

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def classes(self) -> list[int]:
        return sorted(r for r in self.members)

    def class_of(self, t: Term) -> int | None:
        i = self.locate(t)
        return None if i is None else self.find(i)

    # ------------------------------------------------------------ proof forest

    def _path(self, i: int) -> list[int]:
        out = [i]
        while self.edges[out[-1]] is not None:
            out.append(self.edges[out[-1]].to)
        return out

    def _reroot(self, i: int) -> None:
        prev_edge = None
        cur = i
        while cur is not None:
            e = self.edges[cur]
            self.edges[cur] = prev_edge
            if e is None:
                break
            prev_edge = _Edge(cur, e.deriv, not e.forward)
            cur = e.to

    def explain(self, a: int, b: int) -> Derivation | None:
        """A derivation of ``terms[a] == terms[b]``, None when they coincide."""
        if a == b:
            return None
        key = (a, b)
        if key in self._explain:
            return self._explain[key]
        pa, pb = self._path(a), self._path(b)
        on_a = {x: k for k, x in enumerate(pa)}
        k_b = next(k for k, x in enumerate(pb) if x in on_a)
        lca = pb[k_b]
        steps = []
        for x in pa[:on_a[lca]]:
            e = self.edges[x]
            steps.append(e.deriv if e.forward else sym(e.deriv))
        for x in reversed(pb[:k_b]):
            e = self.edges[x]
            steps.append(sym(e.deriv) if e.forward else e.deriv)
        out = chain(steps)
        self._explain[key] = out
        return out

    # ------------------------------------------------------------ levels

    def level_of(self, i: int) -> FrameElement:
        return self.level[self.find(i)]

    def level_proof(self, i: int, required: FrameElement | None = None) -> Derivation:
        """``|- mem l terms[i]`` for the class level, or for ``required`` below it."""
        r = self.find(i)
        t = self.terms[i]
        if r not in self.best or (required is not None and required == self.frame.bottom):
            return inf((), t, self.frame)
        bt, bd = self.best[r]
        d = bd if bt == i else fun(self.explain(bt, i), bd)
        if required is not None and required != self.level[r]:
            d = mon(d, required)
        return d

    def _contribute(self, i: int, l: FrameElement, d: Derivation) -> bool:
        r = self.find(i)
        cur = self.level[r]
        if l <= cur:
            return False
        if cur <= l:
            self.best[r] = (i, d)
            self.level[r] = l
        else:
            bt, bd = self.best[r]
            old = bd if bt == i else fun(self.explain(bt, i), bd)
            joined = sup([old, d], self.frame)
            self.best[r] = (i, joined)
            self.level[r] = joined.conclusion.conclusion.level
        self.changes += 1
        self._pending.extend(("exp", p) for p in self.uses[r])
        return True

    def _check_exp(self, p: int) -> None:
        args = self.args[p]
        levels = [self.level[self.find(a)] for a in args]
        m = self.frame.inf_of(levels)
        if m <= self.level[self.find(p)]:
            return
        op = self.terms[p].op
        d = exp(op, [self.level_proof(a) for a in args], self.frame)
        self._contribute(p, m, d)

    # ------------------------------------------------------------ merging

    def _merge(self, a: int, b: int, d: Derivation) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self._reroot(a)
        self.edges[a] = _Edge(b, d, True)
        if len(self.members[ra]) > len(self.members[rb]):
            ra, rb = rb, ra
        # ra is absorbed into rb
        self.parent[ra] = rb
        self.members[rb].extend(self.members.pop(ra))
        self.rep[rb] = min(self.rep[rb], self.rep[ra])
        moved = self.uses.pop(ra)
        self.uses[rb].extend(moved)
        self.changes += 1
        for p in moved:
            key = (self.terms[p].op, tuple(self.find(x) for x in self.args[p]))
            q = self.sig.get(key)
            if q is not None and self.find(q) != self.find(p):
                self._pending.append(("cong", p, q))
            else:
                self.sig[key] = p
        la = self.level.pop(ra)
        best_a = self.best.pop(ra, None)
        if best_a is not None:
            self._contribute(best_a[0], la, best_a[1])
        # a raised class level already queued its uses; only moved uses may see new argument levels
        self._pending.extend(("exp", p) for p in moved)
        return True

    def _drain(self) -> None:
        while self._pending:
            job = self._pending.pop()
            if job[0] == "cong":
                _, p, q = job
                if self.find(p) == self.find(q):
                    continue
                t = self.terms[p]
                steps = []
                for x, y in zip(self.args[p], self.args[q]):
                    e = self.explain(x, y)
                    steps.append(e if e is not None else refl((), self.terms[x]))
                self._merge(p, q, cong(t.op, steps))
            else:
                self._check_exp(job[1])

    # ------------------------------------------------------------ evaluation

    def locate(self, t: Term) -> int | None:
        """Universe term in the class of ``t``, or None if ``t`` escapes the bound."""
        i = self.tid.get(t)
        if i is not None:
            return i
        if not isinstance(t, App):
            return None
        args = []
        for a in t.args:
            j = self.locate(a)
            if j is None:
                return None
            args.append(self.find(j))
        return self.sig.get((t.op, tuple(args)))

    def eval_proof(self, t: Term) -> tuple[int, Derivation | None]:
        """Like :meth:`locate` (which must succeed) plus a proof of ``t == terms[i]``."""
        i = self.tid.get(t)
        if i is not None:
            return i, None
        parts = [self.eval_proof(a) for a in t.args]
        w = self.sig[(t.op, tuple(self.find(j) for j, _ in parts))]
        steps = []
        for (j, p), wa, targ in zip(parts, self.args[w], t.args):
            d = chain([p, self.explain(j, wa)])
            steps.append(d if d is not None else refl((), targ))
        return w, cong(t.op, steps)

    def prove(self, phi: Formula) -> Derivation | None:
        """A premise-free derivation of the ground formula, or None if not reached."""
        if isinstance(phi, Mem):
            if phi.level == self.frame.bottom:
                return inf((), phi.term, self.frame)
            i = self.locate(phi.term)
            if i is None or not phi.level <= self.level[self.find(i)]:
                return None
            i, p = self.eval_proof(phi.term)
            d = self.level_proof(i, phi.level)
            return d if p is None else fun(sym(p), d)
        if phi.lhs == phi.rhs:
            return refl((), phi.lhs)
        i, j = self.locate(phi.lhs), self.locate(phi.rhs)
        if i is None or j is None or self.find(i) != self.find(j):
            return None
        i, p = self.eval_proof(phi.lhs)
        j, q = self.eval_proof(phi.rhs)
        return chain([p, self.explain(i, j), None if q is None else sym(q)], start=phi.lhs)

    def holds(self, phi: Formula) -> bool:
        if isinstance(phi, Mem):
            if phi.level == self.frame.bottom:
                return True
            i = self.locate(phi.term)
            return i is not None and phi.level <= self.level[self.find(i)]
        if phi.lhs == phi.rhs:
            return True
        i, j = self.locate(phi.lhs), self.locate(phi.rhs)
        return i is not None and j is not None and self.find(i) == self.find(j)

    # ------------------------------------------------------------ axioms

    def _index(self):
        enodes: dict[int, set] = {r: set() for r in self.members}
        for i, a in enumerate(self.args):
            if a is not None:
                enodes[self.find(i)].add((self.terms[i].op, tuple(self.find(x) for x in a)))
        consts = {t.name: self.find(i) for i, t in enumerate(self.terms) if isinstance(t, Const)}
        return {r: sorted(v) for r, v in enodes.items()}, consts

    def _match(self, pat: Term, cls: int, sigma: dict, enodes, consts) -> Iterator[dict]:
        if isinstance(pat, Var):
            bound = sigma.get(pat.name)
            if bound is None:
                yield {**sigma, pat.name: cls}
            elif bound == cls:
                yield sigma
        elif isinstance(pat, Const):
            if consts.get(pat.name) == cls:
                yield sigma
        else:
            for op, args in enodes[cls]:
                if op != pat.op:
                    continue
                yield from self._match_args(pat.args, args, 0, sigma, enodes, consts)

    def _match_args(self, pats, classes, k, sigma, enodes, consts):
        if k == len(pats):
            yield sigma
            return
        for s2 in self._match(pats[k], classes[k], sigma, enodes, consts):
            yield from self._match_args(pats, classes, k + 1, s2, enodes, consts)

    def _instances(self, ax: Sequent, enodes, consts) -> Iterator[dict]:
        vs = sorted(ax.variables())
        if not vs:
            yield {}
            return
        pats = []
        for phi in ax.formulas():
            for t in formula_terms(phi):
                if not isinstance(t, Var) and variables_of(t) and t not in pats:
                    pats.append(t)
        pats.sort(key=lambda t: (-len(variables_of(t)), -t.size))
        floors: dict[str, FrameElement] = {}
        for phi in ax.premises:
            if isinstance(phi, Mem) and isinstance(phi.term, Var):
                x = phi.term.name
                floors[x] = floors.get(x, self.frame.bottom) | phi.level
        roots = self.classes()

        def rec(i: int, sigma: dict):
            if i == len(pats):
                free = [x for x in vs if x not in sigma]
                pools = [[r for r in roots if floors.get(x, self.frame.bottom) <= self.level[r]]
                         for x in free]
                for combo in product(*pools):
                    yield {**sigma, **dict(zip(free, combo))}
                return
            p = pats[i]
            if variables_of(p) <= sigma.keys():
                yield from rec(i + 1, sigma)
                return
            for r in roots:
                for s2 in self._match(p, r, sigma, enodes, consts):
                    yield from rec(i + 1, s2)

        seen = set()
        for sigma in rec(0, {}):
            key = tuple(sigma[x] for x in vs)
            if key not in seen:
                seen.add(key)
                yield sigma

    def _fire(self, idx: int, ax: Sequent, sigma_cls: dict) -> bool:
        sigma = Substitution({x: self.terms[self.rep[self.find(c)]] for x, c in sigma_cls.items()})
        inst = subst_sequent(ax, sigma)
        for phi in inst.premises:
            if not self.holds(phi):
                return False
        c = inst.conclusion
        if isinstance(c, Eq):
            i, j = self.locate(c.lhs), self.locate(c.rhs)
            if i is None or j is None or self.find(i) == self.find(j):
                return False
        else:
            i = self.locate(c.term)
            if i is None or c.level <= self.level[self.find(i)]:
                return False
        d = axiom(self.theory, idx)
        if sigma:
            d = sub(d, sigma)
        if inst.premises:
            phis = sorted(inst.premises, key=formula_key)
            d = cut([self.prove(phi) for phi in phis], d)
        if isinstance(c, Eq):
            i, p = self.eval_proof(c.lhs)
            j, q = self.eval_proof(c.rhs)
            self._merge(i, j, chain([None if p is None else sym(p), d, q]))
        else:
            i, p = self.eval_proof(c.term)
            self._contribute(i, c.level, d if p is None else fun(p, d))
        self._drain()
        return True

    def run(self, max_steps: int) -> Closure:
        for i, a in enumerate(self.args):
            if a is not None:
                self._pending.append(("exp", i))
        self._drain()
        while True:
            enodes, consts = self._index()
            jobs = []
            for idx, ax in enumerate(self.theory.axioms):
                for sigma in self._instances(ax, enodes, consts):
                    jobs.append((idx, ax, sigma))
            changed = False
            for idx, ax, sigma in jobs:
                self.steps += 1
                if self.steps > max_steps:
                    raise BudgetExhausted(f"step budget {max_steps} exhausted", self)
                changed |= self._fire(idx, ax, sigma)
            if not changed:
                self.complete = True
                return self

    # ------------------------------------------------------------ reporting

    def facts(self) -> Iterator[Formula]:
        """Ground facts in canonical form: member equations and class levels."""
        for r in self.classes():
            rep = self.terms[self.rep[r]]
            for m in sorted(self.members[r]):
                if m != self.rep[r]:
                    yield Eq(rep, self.terms[m])
            if self.level[r] != self.frame.bottom:
                yield Mem(self.level[r], rep)


def saturate(theory: Theory, depth: int, max_steps: int = 1_000_000,
             max_terms: int = 200_000) -> Closure:
    """Saturate the ground consequences of ``theory`` on terms up to ``depth``."""
    return Closure(theory, depth, max_terms=max_terms).run(max_steps)


@dataclass(frozen=True)
class Proven:
    derivation: Derivation


@dataclass(frozen=True)
class Unknown:
    reason: str = "not reached within the bounds"


def derives(theory: Theory, phi: Formula, depth: int | None = None,
            max_steps: int = 1_000_000, closure: Closure | None = None) -> Proven | Unknown:
    """Search for a premise-free derivation of a ground formula.

    A ``closure`` already saturated for ``theory`` is reused instead of
    saturating again.
    """
    for t in formula_terms(phi):
        if variables_of(t):
            raise ValueError(f"derives expects a ground formula, got {phi}")
    if isinstance(phi, Mem) and phi.level == theory.frame.bottom:
        return Proven(inf((), phi.term, theory.frame))
    if isinstance(phi, Eq) and phi.lhs == phi.rhs:
        return Proven(refl((), phi.lhs))
    if closure is not None:
        if closure.theory != theory:
            raise ValueError("the closure was built for another theory")
        d = closure.prove(phi)
        return Proven(d) if d is not None else Unknown()
    if depth is None:
        depth = max(t.depth for t in formula_terms(phi))
    try:
        cl = saturate(theory, depth, max_steps=max_steps)
    except BudgetExhausted as exc:
        cl = exc.partial
        if cl is None:
            return Unknown(str(exc))
        d = cl.prove(phi)
        return Proven(d) if d is not None else Unknown(str(exc))
    d = cl.prove(phi)
    return Proven(d) if d is not None else Unknown()
