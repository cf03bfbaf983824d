"""Single-node mutations of derivation trees that keep every conclusion unchanged.

Each mutation alters only the rule or its side data at one node, chosen so
that the node is no longer a correct rule instance.  The expected rejection
path is therefore the mutated node's own path.
"""

from __future__ import annotations

import random

from fuzzalg.logic import Eq, Mem, subst_sequent
from fuzzalg.proof.derivation import (A, Axiom, Cong, Cut, Derivation, Exp, Fun, Inf, Mon, Refl,
                                      Sub, Sup, Sym, Trans, Weak)
from fuzzalg.syntax import Const, Substitution, Var


def candidates(theory, node: Derivation) -> list:
    """Replacement rules for ``node``, each wrong for it by construction."""
    frame = theory.frame
    rule = node.rule
    c = node.conclusion.conclusion
    n = len(node.premises)
    out = [Trans() if n == 1 else Sym()]          # premise count cannot match
    if n:
        out += [A(), Refl(), Inf()]               # zero-premise rules with premises present
    else:
        if not (isinstance(c, Eq) and c.lhs == c.rhs):
            out.append(Refl())
        if not (isinstance(c, Mem) and c.level == frame.bottom):
            out.append(Inf())
        if c not in node.conclusion.premises:
            out.append(A())
    # rules whose conclusion has the other formula kind
    if isinstance(c, Mem):
        out += [Cong(f) for f, _ in theory.signature.ops]
        if n == 2:
            out.append(Trans())
    else:
        out += [Exp(f) for f, _ in theory.signature.ops]
        if n == 2:
            out.append(Fun())
    if isinstance(rule, Axiom):
        out += [Axiom(i) for i, ax in enumerate(theory.axioms) if ax != node.conclusion]
        out.append(Axiom(len(theory.axioms)))
    elif isinstance(rule, (Cong, Exp)):
        out += [type(rule)(f) for f, _ in theory.signature.ops if f != rule.op]
    elif isinstance(rule, Mon):
        p = node.premises[0].conclusion.conclusion
        out += [Mon(l) for l in frame.elements if (p.level & l) != c.level]
    elif isinstance(rule, Weak):
        extras = [phi for phi in _formula_pool(theory) if phi not in node.conclusion.premises]
        out += [Weak(rule.delta | {phi}) for phi in extras[:3]]
    elif isinstance(rule, Cut) and rule.phis:
        out.append(Cut(rule.phis[:-1]))
    elif isinstance(rule, Sub):
        prem = node.premises[0].conclusion
        for x in sorted(prem.variables()):
            for y in theory.language.variables:
                sigma = dict(rule.sigma)
                sigma[x] = Var(y)
                if subst_sequent(prem, sigma) != node.conclusion:
                    out.append(Sub(Substitution(sigma)))
                    break
    elif isinstance(rule, Sup) and rule.levels:
        out += [Sup(rule.levels[:-1] + (l,)) for l in frame.elements if l not in rule.levels][:1]
    return list(dict.fromkeys(r for r in out if r != rule))


def _formula_pool(theory):
    frame = theory.frame
    xs = [Var(x) for x in theory.language.variables]
    cs = [Const(c) for c in sorted(theory.signature.consts)]
    for t in xs + cs:
        for l in frame.elements:
            yield Mem(l, t)
    for a in xs:
        for b in xs:
            yield Eq(a, b)


def mutations(theory, d: Derivation, k: int, seed: int = 0):
    """``k`` distinct (path, mutated tree) pairs, spread over as many nodes as possible."""
    rng = random.Random(seed)
    pool = [(path, rule) for path, node in d.nodes() for rule in candidates(theory, node)]
    rng.shuffle(pool)
    seen, first, rest = set(), [], []
    for path, rule in pool:
        (rest if path in seen else first).append((path, rule))
        seen.add(path)
    out = []
    for path, rule in (first + rest)[:k]:
        node = d.at(path)
        out.append((path, d.replace(path, Derivation(node.conclusion, rule, node.premises))))
    return out
