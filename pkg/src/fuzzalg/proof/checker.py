"""Verification of derivation trees against a theory."""

from __future__ import annotations

from ..logic import Eq, Mem, Sequent, Theory, subst_sequent, validate_sequent
from ..syntax import App, validate_term
from .derivation import (A, Axiom, Cong, Cut, Derivation, Exp, Fun, Inf, Mon, Refl, Sub, Sup,
                         Sym, Trans, Weak, format_path, rule_name)


class DerivationError(ValueError):
    def __init__(self, path: tuple[int, ...], msg: str):
        super().__init__(f"{format_path(path)}: {msg}")
        self.path = tuple(path)
        self.msg = msg


class RuleMismatch(DerivationError):
    pass


class UnknownAxiom(DerivationError):
    pass


class SideDataError(DerivationError):
    pass


def check_derivation(theory: Theory, d: Derivation, literal_trans: bool = False) -> Sequent:
    """Return the conclusion of ``d`` if every node is a correct rule instance.

    Premises are checked before the node itself, so a single faulty node is
    reported at its own path.  Shared subtrees are checked once.
    """
    done: set[int] = set()
    stack: list[tuple[tuple[int, ...], Derivation, bool]] = [((), d, False)]
    while stack:
        path, node, expanded = stack.pop()
        if id(node) in done:
            continue
        if not expanded:
            stack.append((path, node, True))
            for i in reversed(range(len(node.premises))):
                stack.append((path + (i,), node.premises[i], False))
            continue
        _check_node(theory, node, path, literal_trans)
        done.add(id(node))
    return d.conclusion


def _check_node(theory: Theory, node: Derivation, path, literal_trans: bool) -> None:
    frame = theory.frame
    s = node.conclusion
    try:
        validate_sequent(s, theory.language, frame)
    except (ValueError, TypeError) as exc:
        raise SideDataError(path, f"ill-formed conclusion: {exc}") from None
    rule = node.rule
    prem = [p.conclusion for p in node.premises]
    name = rule_name(rule)

    def fail(msg: str):
        raise RuleMismatch(path, f"{name}: {msg}")

    def arity(n: int):
        if len(prem) != n:
            fail(f"expects {n} premise(s), got {len(prem)}")

    def same_context():
        for p in prem:
            if p.premises != s.premises:
                fail("premise context differs from the conclusion's")

    c = s.conclusion
    if isinstance(rule, Axiom):
        arity(0)
        if rule.index is None:
            if s not in theory:
                raise UnknownAxiom(path, f"{s} is not an axiom")
            return
        if not isinstance(rule.index, int) or not 0 <= rule.index < len(theory.axioms):
            raise UnknownAxiom(path, f"no axiom with index {rule.index}")
        if theory.axioms[rule.index] != s:
            fail(f"axiom {rule.index} is {theory.axioms[rule.index]}, not {s}")
    elif isinstance(rule, A):
        arity(0)
        if c not in s.premises:
            fail(f"{c} is not among the premises")
    elif isinstance(rule, Weak):
        arity(1)
        try:
            for phi in rule.delta:
                validate_sequent(Sequent(frozenset(), phi), theory.language, frame)
        except (ValueError, TypeError) as exc:
            raise SideDataError(path, f"ill-formed weakening set: {exc}") from None
        if prem[0].conclusion != c or prem[0].premises | rule.delta != s.premises:
            fail("conclusion is not the premise widened by the weakening set")
    elif isinstance(rule, Cut):
        phis = tuple(rule.phis)
        if len(set(phis)) != len(phis):
            raise SideDataError(path, "Cut formulas repeat")
        arity(len(phis) + 1)
        *supports, main = prem
        for phi, p in zip(phis, supports):
            if p.premises != s.premises or p.conclusion != phi:
                fail(f"support for {phi} does not conclude it under the conclusion's premises")
        if main.premises != frozenset(phis) or main.conclusion != c:
            fail("last premise must derive the conclusion from the cut formulas")
    elif isinstance(rule, Refl):
        arity(0)
        if not (isinstance(c, Eq) and c.lhs == c.rhs):
            fail(f"{c} is not of the form t == t")
    elif isinstance(rule, Sym):
        arity(1)
        same_context()
        p = prem[0].conclusion
        if not (isinstance(p, Eq) and isinstance(c, Eq) and p.lhs == c.rhs and p.rhs == c.lhs):
            fail("conclusion is not the premise equation reversed")
    elif isinstance(rule, Trans):
        arity(2)
        same_context()
        p1, p2 = prem[0].conclusion, prem[1].conclusion
        if not (isinstance(p1, Eq) and isinstance(p2, Eq) and isinstance(c, Eq)):
            fail("all formulas must be equations")
        if p1.rhs != p2.lhs:
            fail("middle terms of the premises differ")
        ok = c.lhs == p1.lhs and c.rhs == p2.rhs
        if literal_trans:
            ok = ok or (c.lhs == p1.rhs and c.rhs == p2.rhs)
        if not ok:
            fail("conclusion does not join the outer terms")
    elif isinstance(rule, Sub):
        arity(1)
        try:
            for x, t in rule.sigma.items():
                if x not in theory.language.variables:
                    raise ValueError(f"{x} is not a variable")
                validate_term(t, theory.language)
        except (ValueError, TypeError) as exc:
            raise SideDataError(path, f"bad substitution: {exc}") from None
        if subst_sequent(prem[0], rule.sigma) != s:
            fail("conclusion is not the substituted premise")
    elif isinstance(rule, Cong):
        if not theory.signature.has_op(rule.op):
            raise SideDataError(path, f"unknown operation {rule.op}")
        arity(theory.signature.arity(rule.op))
        same_context()
        eqs = [p.conclusion for p in prem]
        if not all(isinstance(e, Eq) for e in eqs) or not isinstance(c, Eq):
            fail("all formulas must be equations")
        want = Eq(App(rule.op, tuple(e.lhs for e in eqs)), App(rule.op, tuple(e.rhs for e in eqs)))
        if c != want:
            fail(f"expected {want}")
    elif isinstance(rule, Inf):
        arity(0)
        if not (isinstance(c, Mem) and c.level == frame.bottom):
            fail(f"{c} is not a bottom-level membership")
    elif isinstance(rule, Mon):
        arity(1)
        same_context()
        if rule.level not in frame:
            raise SideDataError(path, f"{rule.level!r} is not a level of {frame.name}")
        p = prem[0].conclusion
        if not (isinstance(p, Mem) and isinstance(c, Mem)):
            fail("premise and conclusion must be memberships")
        if c.term != p.term or c.level != frame.meet(p.level, rule.level):
            fail(f"expected mem {frame.meet(p.level, rule.level)} {p.term}")
    elif isinstance(rule, Exp):
        if not theory.signature.has_op(rule.op):
            raise SideDataError(path, f"unknown operation {rule.op}")
        arity(theory.signature.arity(rule.op))
        same_context()
        ms = [p.conclusion for p in prem]
        if not all(isinstance(m, Mem) for m in ms) or not isinstance(c, Mem):
            fail("all formulas must be memberships")
        want = Mem(frame.inf_of(m.level for m in ms), App(rule.op, tuple(m.term for m in ms)))
        if c != want:
            fail(f"expected {want}")
    elif isinstance(rule, Sup):
        levels = tuple(rule.levels)
        if any(l not in frame for l in levels):
            raise SideDataError(path, "Sup levels must belong to the frame")
        if len(set(levels)) != len(levels):
            raise SideDataError(path, "Sup levels repeat")
        arity(len(levels))
        same_context()
        if not isinstance(c, Mem):
            fail("conclusion must be a membership")
        for l, p in zip(levels, prem):
            if p.conclusion != Mem(l, c.term):
                fail(f"premise for level {l} must be mem {l} {c.term}")
        if c.level != frame.sup_of(levels):
            fail(f"expected level {frame.sup_of(levels)}")
    elif isinstance(rule, Fun):
        arity(2)
        same_context()
        e, m = prem[0].conclusion, prem[1].conclusion
        if not (isinstance(e, Eq) and isinstance(m, Mem) and isinstance(c, Mem)):
            fail("expects an equation and a membership")
        if m.term != e.lhs or c != Mem(m.level, e.rhs):
            fail("membership must move along the equation from left to right")
    else:
        raise SideDataError(path, f"unknown rule {rule!r}")
