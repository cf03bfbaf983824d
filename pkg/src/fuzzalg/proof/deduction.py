"""Moving premises between a theory and a sequent's context."""

from __future__ import annotations

from typing import Iterable

from ..logic import Formula, Sequent, Theory, extend_with_formulas, formula_key
from .derivation import (A, Axiom, Cut, Derivation, Inf, Refl, Sub, Weak, assume, axiom, cut,
                         weak, widen)
from .checker import DerivationError


class ContainsSub(DerivationError):
    pass


class NotAPremise(ValueError):
    pass


def deduction_split(theory: Theory, gamma: Iterable[Formula], d: Derivation) -> tuple[Theory, Derivation]:
    """From ``Gamma u Delta |- psi`` over ``theory`` derive ``Delta |- psi`` over ``theory[Gamma]``."""
    gamma = frozenset(gamma)
    concl = d.conclusion
    if not gamma <= concl.premises:
        raise NotAPremise(f"{sorted(map(str, gamma - concl.premises))} not among the premises")
    ext = extend_with_formulas(theory, gamma)
    if not gamma:
        return ext, d
    delta = concl.premises - gamma
    phis = sorted(concl.premises, key=formula_key)
    supports = []
    for phi in phis:
        if phi in gamma:
            idx = ext.index_of(Sequent(frozenset(), phi))
            leaf = axiom(ext, idx)
            supports.append(weak(leaf, delta) if delta else leaf)
        else:
            supports.append(assume(delta, phi))
    return ext, cut(supports, d) if supports else d


def deduction_merge(theory: Theory, gamma: Iterable[Formula], d: Derivation) -> Derivation:
    """From a Sub-free ``Delta |- psi`` over ``theory[Gamma]`` derive ``Gamma u Delta |- psi``.

    ``theory`` must be the base theory, so its axioms keep their indices in
    the extension.
    """
    gamma = frozenset(gamma)
    ext = extend_with_formulas(theory, gamma)
    base = len(theory.axioms)
    memo: dict[int, Derivation] = {}

    def go(node: Derivation, path: tuple[int, ...]) -> Derivation:
        key = id(node)
        if key in memo:
            return memo[key]
        s = node.conclusion
        wide = s.premises | gamma
        rule = node.rule
        if isinstance(rule, Sub):
            raise ContainsSub(path, "merging is only defined for Sub-free derivations")
        if isinstance(rule, Axiom):
            ax = s if rule.index is None else ext.axioms[rule.index]
            idx = theory.index_of(ax)
            if idx is not None and (rule.index is None or rule.index < base):
                out = widen(axiom(theory, idx), wide)
            else:
                # an axiom |- phi contributed by Gamma
                out = assume(wide, ax.conclusion)
        elif isinstance(rule, (A, Inf, Refl)):
            out = Derivation(Sequent(wide, s.conclusion), rule)
        elif isinstance(rule, Weak):
            inner = go(node.premises[0], path + (0,))
            out = Derivation(Sequent(wide, s.conclusion), rule, (inner,))
        elif isinstance(rule, Cut):
            *supports, main = node.premises
            main2 = go(main, path + (len(supports),))
            by_phi = {phi: go(p, path + (i,)) for i, (phi, p) in enumerate(zip(rule.phis, supports))}
            phis = sorted(main2.conclusion.premises, key=formula_key)
            new_supports = [by_phi[phi] if phi in by_phi else assume(wide, phi) for phi in phis]
            out = Derivation(Sequent(wide, s.conclusion), Cut(tuple(phis)), (*new_supports, main2))
        else:
            prem = tuple(go(p, path + (i,)) for i, p in enumerate(node.premises))
            out = Derivation(Sequent(wide, s.conclusion), rule, prem)
        memo[key] = out
        return out

    return go(d, ())
