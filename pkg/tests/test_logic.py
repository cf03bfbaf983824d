import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzalg.fixtures import H3, LANG_S, formula, groups, left_ideals, semigroups
from fuzzalg.frame import FuzzySet
from fuzzalg.logic import (Eq, Mem, Sequent, Theory, classify_theory, extend_with_formulas,
                           extend_with_fuzzy_set, map_sequent, parse_formula, parse_sequent,
                           subst_sequent, transport_backward, transport_forward)
from fuzzalg.syntax import (Const, Language, LanguageMorphism, NameClash, Signature, Substitution,
                            Var, parse_term)

from strategies import LANG, sequents, substitutions


def seq(text, theory=None):
    th = theory or semigroups()
    return parse_sequent(text, th.language, th.frame)


def test_subst_sequent_example():
    th = groups()
    s = parse_sequent("[mem h x] |- mem h mul(x, y)", th.language, th.frame)
    out = subst_sequent(s, {"x": parse_term("e", th.language)})
    assert out == parse_sequent("[mem h e] |- mem h mul(e, y)", th.language, th.frame)
    assert subst_sequent(s, {}) == s


@given(sequents(H3()), substitutions(), substitutions())
def test_subst_sequent_composition(s, a, b):
    sigma, tau = Substitution(a), Substitution(b)
    assert subst_sequent(subst_sequent(s, sigma), tau) == subst_sequent(s, sigma.then(tau))


def test_premises_are_a_set():
    s = seq("[mem h x, mem h x] |- mem h mul(x, x)")
    assert len(s.premises) == 1
    assert seq(str(s)) == s


def test_levels_must_belong_to_frame():
    with pytest.raises(Exception):
        seq("|- mem q x")


def renaming():
    tgt = Language(Signature({"star": 2}), ("u", "v", "w"))
    return LanguageMorphism(LANG_S, tgt, {"mul": "star"}, {}, {"x": "u", "y": "v", "z": "w"})


def test_transport_identity():
    th = left_ideals()
    assert transport_forward(th, LanguageMorphism.identity(th.language)) == th


def test_transport_round_trip_injective():
    th = left_ideals()
    F = renaming()
    back = transport_backward(transport_forward(th, F), F)
    assert back == th


def test_transport_non_injective_grows():
    th = semigroups()
    F = LanguageMorphism(LANG_S, Language(LANG_S.signature, ("x",)), {"mul": "mul"}, {},
                         {"x": "x", "y": "x", "z": "x"})
    image = transport_forward(th, F)
    back = transport_backward(image, F)
    assert set(th.axioms) <= set(back.axioms) and len(back.axioms) > len(th.axioms)


@given(st.data())
def test_galois_connection(data):
    F = renaming()
    base = left_ideals()
    pool = list(base.axioms) + [seq("|- mul(x, y) == mul(y, x)"), seq("[mem h x] |- mem 1 x")]
    t1 = Theory(LANG_S, H3(), data.draw(st.lists(st.sampled_from(pool), max_size=4)))
    target_pool = [map_sequent(s, F) for s in pool]
    t2 = Theory(F.target, H3(), data.draw(st.lists(st.sampled_from(target_pool), max_size=4)))
    lhs = transport_forward(t1, F).issubset(t2)
    rhs = t1.issubset(transport_backward(t2, F))
    assert lhs == rhs


def test_transport_preserves_shape():
    F = renaming()
    for th in (semigroups(), left_ideals()):
        assert classify_theory(transport_forward(th, F)).label == classify_theory(th).label


def test_extend_with_formulas():
    th = semigroups()
    assert extend_with_formulas(th, []) == th
    phi = formula("mem h x", th)
    ext = extend_with_formulas(th, [phi])
    assert Sequent(frozenset(), phi) in ext
    assert extend_with_formulas(ext, [phi]) == ext


def test_extend_with_fuzzy_set():
    th = semigroups()
    fr = th.frame
    ext, inc = extend_with_fuzzy_set(th, FuzzySet(fr, {}))
    assert ext.axioms == th.axioms
    ext, inc = extend_with_fuzzy_set(th, FuzzySet(fr, {"a": fr.top, "b": fr.bottom}))
    assert ext.signature.consts == {"a", "b"}
    assert Sequent(frozenset(), Mem(fr.top, Const("a"))) in ext
    assert Sequent(frozenset(), Mem(fr.bottom, Const("b"))) in ext
    assert transport_backward(ext, inc) == th


def test_extend_with_fuzzy_set_name_clash():
    th = semigroups()
    with pytest.raises(NameClash):
        extend_with_fuzzy_set(th, FuzzySet(th.frame, {"x": th.frame.top}))


def test_classify_examples():
    assert classify_theory(semigroups()).label == "unconditional"
    assert classify_theory(left_ideals()).label == "type_E"
    th = Theory(LANG_S, H3(), [seq("[x == y] |- mem h x")])
    c = classify_theory(th)
    assert c.label == "basic" and c.witness == th.axioms[0]
    th = Theory(LANG_S, H3(), [seq("[mem h mul(x, y)] |- mem h x")])
    assert classify_theory(th).label == "general"


def test_formula_round_trip():
    th = groups()
    for text in ("mem h mul(x, inv(x))", "e == mul(e, e)", "mem 0 x"):
        phi = parse_formula(text, th.language, th.frame)
        assert parse_formula(str(phi), th.language, th.frame) == phi


@given(sequents(H3()))
def test_sequent_round_trip(s):
    assert parse_sequent(str(s), LANG, H3()) == s


def test_eq_and_mem_shapes():
    assert isinstance(formula("x == y", semigroups()), Eq)
    assert formula("mem 1 x", semigroups()) == Mem(H3().top, Var("x"))
