"""Equational chains built from axiom rewrites inside a context."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ..logic import Eq, Formula, Theory
from ..syntax import App, Substitution, Term, match, subterm_at
from .derivation import Derivation, axiom, cong, refl, sub, sym, trans, widen


class RewriteError(ValueError):
    pass


def in_context(t: Term, pos: Sequence[int], d: Derivation, gamma: frozenset) -> Derivation:
    """Lift ``gamma |- l == r`` at position ``pos`` of ``t`` to ``t == t[pos := r]`` with Cong."""
    if not pos:
        return d
    assert isinstance(t, App)
    i = pos[0]
    inner = in_context(t.args[i], pos[1:], d, gamma)
    parts = [inner if k == i else refl(gamma, a) for k, a in enumerate(t.args)]
    return cong(t.op, parts)


def rewrite(theory: Theory, index: int, t: Term, pos: Sequence[int] = (),
            reverse: bool = False, gamma: Iterable[Formula] = (),
            sigma: Mapping[str, Term] | None = None) -> Derivation:
    """One step ``gamma |- t == t'`` using unconditional equational axiom ``index``.

    The axiom is read right to left when ``reverse`` is set.  Variables not
    fixed by matching the used side against the subterm come from ``sigma``.
    """
    gamma = frozenset(gamma)
    ax = theory.axioms[index]
    if ax.premises or not isinstance(ax.conclusion, Eq):
        raise RewriteError(f"axiom {index} is not an unconditional equation")
    lhs, rhs = ax.conclusion.lhs, ax.conclusion.rhs
    src = rhs if reverse else lhs
    target = subterm_at(t, pos)
    found = match(src, target, sigma)
    if found is None:
        raise RewriteError(f"{src} does not match {target}")
    sigma = Substitution(found)
    d = axiom(theory, index)
    if sigma:
        d = sub(d, sigma)
    if reverse:
        d = sym(d)
    if sigma.apply(lhs if reverse else rhs) != d.conclusion.conclusion.rhs:
        raise RewriteError(f"variables of the other side of axiom {index} are unbound")
    d = widen(d, gamma)
    return in_context(t, pos, d, gamma)


def rewrite_chain(theory: Theory, start: Term, steps: Iterable[tuple],
                  gamma: Iterable[Formula] = ()) -> Derivation:
    """Fold rewrite steps ``(index, pos, reverse[, sigma])`` into one ``start == end``."""
    gamma = frozenset(gamma)
    acc = None
    t = start
    for step in steps:
        index, pos, reverse, *rest = step
        d = rewrite(theory, index, t, pos, reverse, gamma, rest[0] if rest else None)
        t = d.conclusion.conclusion.rhs
        acc = d if acc is None else trans(acc, d)
    return acc if acc is not None else refl(gamma, start)
