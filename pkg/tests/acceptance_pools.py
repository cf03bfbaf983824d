"""Curated theories and equations used by the acceptance suite."""

from __future__ import annotations

from fuzzalg import fixtures as F
from fuzzalg.algebra import FuzzyAlgebra
from fuzzalg.frame import FuzzySet
from fuzzalg.hsp import XEquation
from fuzzalg.logic import Sequent, Theory, extend_with_fuzzy_set, parse_formula
from fuzzalg.syntax import Language, Signature

H = F.H3()
h, top, bot = H["h"], H.top, H.bottom


def _theory(sig, variables, lines, name):
    lang = Language(sig, variables)
    return Theory(lang, H, [Sequent(frozenset(), parse_formula(s, lang, H)) for s in lines], name=name)


def _extend(theory, lines, name):
    lang = theory.language
    extra = [Sequent(frozenset(), parse_formula(s, lang, H)) for s in lines]
    return Theory(lang, H, list(theory.axioms) + extra, name=name)


def ground_theories() -> list[Theory]:
    """Five theories with constants whose term models close below depth 4."""
    out = []
    out.append(_theory(Signature({"s": 1}, frozenset({"a"})), ("x",),
                       ["s(s(a)) == a", "mem h s(a)"], "cyclic2"))
    ls, _ = extend_with_fuzzy_set(F.semigroups(), FuzzySet(H, {"a": h, "b": top}))
    out.append(_extend(ls, ["mul(a, a) == a", "mul(b, b) == b", "mul(a, b) == a",
                            "mul(b, a) == b"], "LS_ab_band"))
    lz, _ = extend_with_fuzzy_set(F.semigroups(), FuzzySet(H, {"a": h, "b": top, "c": bot}))
    out.append(_extend(lz, ["mul(x, y) == x"], "LS_left_zero"))
    out.append(_theory(Signature({"f": 2, "g": 1}, frozenset({"c"})), ("x", "y"),
                       ["g(g(c)) == c", "f(x, y) == y", "mem h g(c)"], "fg_c"))
    li, _ = extend_with_fuzzy_set(F.left_ideals(), FuzzySet(H, {"a": top, "b": h}))
    out.append(_extend(li, ["mul(a, x) == x", "mul(x, a) == x", "mul(b, x) == b",
                            "mul(x, b) == b"], "LI_unit_zero"))
    return out


def _magma(carrier, mu, table, consts=None):
    sig = F.SIG_S
    return FuzzyAlgebra(sig, H, carrier, mu, {"mul": table}, consts or {})


def equations() -> list[XEquation]:
    """Ten equations over the one-operation signature with targets of at most 3 elements."""
    null3 = [[2, 2, 2], [2, 2, 2], [2, 2, 2]]
    out = [
        XEquation(FuzzySet(H, {"x": bot}), _magma(["p"], [top], [[0]]), {"x": "p"}, "idem_top"),
        XEquation(FuzzySet(H, {"x": h}), _magma(["p"], [h], [[0]]), {"x": "p"}, "idem_h"),
        XEquation(FuzzySet(H, {"x": bot, "y": bot}), _magma(["x", "y", "0"], [bot] * 3, null3),
                  {"x": "x", "y": "y"}, "null3"),
        XEquation(FuzzySet(H, {"x": h, "y": top}), _magma(["x", "y", "0"], [h, top, top], null3),
                  {"x": "x", "y": "y"}, "null3_levels"),
        XEquation(FuzzySet(H, {"x": bot, "y": bot}), _magma(["a", "b"], [bot, bot], [[0, 0], [1, 1]]),
                  {"x": "a", "y": "b"}, "left_zero"),
        XEquation(FuzzySet(H, {"x": bot}), _magma(["x", "p"], [bot, top], [[1, 1], [1, 1]]),
                  {"x": "x"}, "square_top"),
        XEquation(FuzzySet(H, {"x": h}), _magma(["e", "g"], [top, h], [[0, 1], [1, 0]]),
                  {"x": "g"}, "z2"),
        XEquation(FuzzySet(H, {"x": top, "y": h}), _magma(["0", "1"], [h, top], [[0, 0], [0, 1]]),
                  {"x": "1", "y": "0"}, "meet_chain"),
        XEquation(FuzzySet(H, {"x": h}), _magma(["x", "x2", "x3"], [h, h, top],
                                                [[1, 2, 2], [2, 2, 2], [2, 2, 2]]),
                  {"x": "x"}, "nilpotent3"),
        XEquation(FuzzySet(H, {"x": h, "y": h, "z": bot}),
                  _magma(["a", "b", "c"], [h, h, bot], [[0, 1, 2], [0, 1, 2], [0, 1, 2]]),
                  {"x": "a", "y": "b", "z": "c"}, "right_zero3"),
    ]
    return out
