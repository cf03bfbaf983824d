"""Running examples: semigroup and group theories, the two derivations, a small fuzzy group."""

from __future__ import annotations

from functools import lru_cache

from .algebra import FuzzyAlgebra
from .frame import Frame, FrameElement, chain
from .logic import Mem, Sequent, Theory, parse_formula, parse_sequent
from .proof.derivation import (Derivation, assume, axiom, cong, cut, exp, fun, refl, sub, sym,
                               widen)
from .proof.rewrite import rewrite_chain
from .syntax import Language, Signature, parse_term

VARIABLES = ("x", "y", "z")

SIG_S = Signature({"mul": 2})
SIG_G = Signature({"mul": 2, "inv": 1}, frozenset({"e"}))
LANG_S = Language(SIG_S, VARIABLES)
LANG_G = Language(SIG_G, VARIABLES)


@lru_cache(maxsize=None)
def H3() -> Frame:
    """The three-element chain 0 < h < 1."""
    return chain(3, ("0", "h", "1"))


ASSOC = "|- mul(mul(x, y), z) == mul(x, mul(y, z))"

GROUP_AXIOMS = (
    "|- mul(x, inv(x)) == e",
    "|- mul(inv(x), x) == e",
    "|- mul(e, x) == x",
    "|- mul(x, e) == x",
    ASSOC,
)
# the list as printed, with x.x == x in place of the right unit law
GROUP_AXIOMS_LITERAL = GROUP_AXIOMS[:3] + ("|- mul(x, x) == x", ASSOC)

# indices into GROUP_AXIOMS
RINV, LINV, LUNIT, RUNIT, ASSOC_G = range(5)


def _theory(lang: Language, frame: Frame, texts, name: str) -> Theory:
    return Theory(lang, frame, [parse_sequent(t, lang, frame) for t in texts], name=name)


def _per_level(lang: Language, frame: Frame, template: str) -> list[Sequent]:
    return [parse_sequent(template.format(l=l.name), lang, frame) for l in frame.elements]


def semigroups(frame: Frame | None = None) -> Theory:
    frame = frame or H3()
    return _theory(LANG_S, frame, [ASSOC], "LS")


def left_ideals(frame: Frame | None = None) -> Theory:
    frame = frame or H3()
    return semigroups(frame).with_axioms(
        _per_level(LANG_S, frame, "[mem {l} y] |- mem {l} mul(x, y)"), name="LLI")


def right_ideals(frame: Frame | None = None) -> Theory:
    frame = frame or H3()
    return semigroups(frame).with_axioms(
        _per_level(LANG_S, frame, "[mem {l} x] |- mem {l} mul(x, y)"), name="LRI")


def ideals(frame: Frame | None = None) -> Theory:
    frame = frame or H3()
    return left_ideals(frame).with_axioms(right_ideals(frame).axioms, name="LI")


def groups(frame: Frame | None = None) -> Theory:
    return _theory(LANG_G, frame or H3(), GROUP_AXIOMS, "LG")


def groups_literal(frame: Frame | None = None) -> Theory:
    return _theory(LANG_G, frame or H3(), GROUP_AXIOMS_LITERAL, "LG_literal")


NORMAL_TEMPLATE = "[mem {l} x] |- mem {l} mul(y, mul(x, inv(y)))"


def normal_groups(frame: Frame | None = None) -> Theory:
    frame = frame or H3()
    return groups(frame).with_axioms(_per_level(LANG_G, frame, NORMAL_TEMPLATE), name="LN")


def normal_axiom_index(theory: Theory, level: FrameElement) -> int:
    s = parse_sequent(NORMAL_TEMPLATE.format(l=level.name), theory.language, theory.frame)
    i = theory.index_of(s)
    if i is None:
        raise KeyError(f"no normality axiom at level {level}")
    return i


# ---------------------------------------------------------------- derivations

def _t(text: str):
    return parse_term(text, LANG_G)


def inverse_involution(theory: Theory, gamma=frozenset()) -> Derivation:
    """``gamma |- y == inv(inv(y))`` from the group axioms."""
    return rewrite_chain(theory, _t("y"), [
        (RUNIT, (), True),
        (RINV, (1,), True, {"x": _t("inv(y)")}),
        (ASSOC_G, (), True),
        (RINV, (0,), False),
        (LUNIT, (), False),
    ], gamma)


CONJUGATE = "mul(y, mul(mul(inv(y), mul(x, y)), inv(y)))"


def conjugate_identity(theory: Theory, gamma=frozenset()) -> Derivation:
    """``gamma |- x == y.((y^-1.(x.y)).y^-1)``, as Sym of the rewrite chain back to x."""
    back = rewrite_chain(theory, _t(CONJUGATE), [
        (ASSOC_G, (1,), False),
        (ASSOC_G, (), True),
        (RINV, (0,), False),
        (LUNIT, (), False),
        (ASSOC_G, (), False),
        (RINV, (1,), False),
        (RUNIT, (), False),
    ], gamma)
    return sym(back)


def unit_membership(theory: Theory | None = None, level: FrameElement | None = None) -> Derivation:
    """``[mem l x] |- mem l e`` over the group axioms."""
    theory = theory or groups()
    frame = theory.frame
    level = level or frame.top
    gamma = frozenset({Mem(level, _t("x"))})
    hyp = assume(gamma, Mem(level, _t("x")))
    body = exp("mul", [hyp, exp("inv", [hyp], frame)], frame)
    return fun(widen(axiom(theory, RINV), gamma), body)


def normal_converse(theory: Theory | None = None, level: FrameElement | None = None) -> Derivation:
    """``[mem l y.(x.y^-1)] |- mem l x`` over the normal group axioms."""
    theory = theory or normal_groups()
    frame = theory.frame
    level = level or frame.top
    ax = axiom(theory, normal_axiom_index(theory, level))
    s1 = sub(ax, {"x": _t("mul(inv(y), mul(x, y))")})
    gamma1 = s1.conclusion.premises
    f1 = fun(widen(sym(conjugate_identity(theory)), gamma1), s1)
    s2 = sub(f1, {"y": _t("inv(y)")})
    # s2 has premise mem l inv(inv(y)).(x.inv(y)); move the hypothesis there with a Cut
    target = _t("mul(y, mul(x, inv(y)))")
    gamma0 = frozenset({Mem(level, target)})
    eq = cong("mul", [widen(inverse_involution(theory), gamma0),
                      refl(gamma0, _t("mul(x, inv(y))"))])
    support = fun(eq, assume(gamma0, Mem(level, target)))
    return cut([support], s2)


# ---------------------------------------------------------------- algebras

def z2_group(frame: Frame | None = None, level: FrameElement | None = None) -> FuzzyAlgebra:
    """Z_2 as a fuzzy group with the unit at top and the generator at ``level``."""
    frame = frame or H3()
    level = frame["h"] if level is None and "h" in frame.names else (level or frame.top)
    return FuzzyAlgebra(SIG_G, frame, ["e", "g"], [frame.top, level],
                        {"mul": [[0, 1], [1, 0]], "inv": [0, 1]}, {"e": "e"}, name="Z2")


def formula(text: str, theory: Theory):
    return parse_formula(text, theory.language, theory.frame)


__all__ = [
    "ASSOC", "CONJUGATE", "GROUP_AXIOMS", "GROUP_AXIOMS_LITERAL", "H3", "LANG_G", "LANG_S",
    "SIG_G", "SIG_S", "conjugate_identity", "groups", "groups_literal", "ideals",
    "inverse_involution", "left_ideals", "normal_axiom_index", "normal_converse", "normal_groups",
    "right_ideals", "semigroups", "unit_membership", "z2_group", "formula",
]
