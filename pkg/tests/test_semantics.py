import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzalg import fixtures as F
from fuzzalg.algebra import (FuzzyAlgebra, OpNotCompatible, classify_morphism, enumerate_algebras,
                             homomorphisms)
from fuzzalg.frame import FuzzySet, chain
from fuzzalg.logic import Eq, Mem, Sequent, Theory
from fuzzalg.proof import saturate
from fuzzalg.semantics import (Countermodel, NoneUpTo, UnboundVariable, eval_term,
                               enumerate_models, find_countermodel, free_model, is_model, model_mask,
                               model_violation, satisfies, satisfies_sequent, sequent_violation,
                               term_model)
from fuzzalg.syntax import App, Const, Language, Signature, Var, parse_term, substitute

import oracles
from strategies import LANG, SIG, algebras, formulas, sequents, substitutions, terms

H = F.H3()
h, top, bot = H["h"], H.top, H.bottom
x, y, z = Var("x"), Var("y"), Var("z")


def seq(text, th, premises=()):
    return Sequent(frozenset(F.formula(p, th) for p in premises), F.formula(text, th))


# ---------------------------------------------------------------- evaluation

def test_eval_examples():
    A = F.z2_group()
    th = F.groups()
    assert eval_term(A, parse_term("mul(x, x)", th.language), {"x": "g"}) == A.index("e")
    assert eval_term(A, Const("e"), {"x": "g"}) == A.consts["e"]
    with pytest.raises(UnboundVariable):
        eval_term(A, x)


@given(algebras(max_size=3), terms(), substitutions(), st.integers(0, 2**32 - 1))
def test_substitution_lemma(A, t, sigma, seed):
    rng = random.Random(seed)
    env = {v: rng.randrange(A.size) for v in LANG.variables}
    env_sigma = {v: eval_term(A, sigma.get(v, Var(v)), env) for v in LANG.variables}
    assert eval_term(A, substitute(t, sigma), env) == eval_term(A, t, env_sigma)


@given(algebras(max_size=3), terms(), st.integers(0, 2**32 - 1))
def test_eval_matches_oracle(A, t, seed):
    rng = random.Random(seed)
    env = {v: rng.randrange(A.size) for v in LANG.variables}
    assert eval_term(A, t, env) == oracles.evaluate(A, t, env)


def test_satisfaction_examples():
    A = F.z2_group()
    th = F.groups()
    mxx = parse_term("mul(x, x)", th.language)
    assert satisfies(A, Mem(h, mxx), {"x": "g"})
    assert not satisfies(A, Mem(top, x), {"x": "g"})
    for a in range(2):
        assert satisfies(A, Mem(bot, x), {"x": a})
        assert satisfies(A, Eq(mxx, mxx), {"x": a})


# ---------------------------------------------------------------- sequents and models

def test_z2_satisfies_group_axioms():
    A = F.z2_group()
    assert satisfies_sequent(A, F.groups().axioms[0])
    assert is_model(A, F.groups()) and is_model(A, F.normal_groups())
    assert not is_model(A, F.groups_literal())


def test_two_point_fuzzy_set_refutes_x_eq_z():
    two = chain(2)
    sig = Signature({}, frozenset())
    A = FuzzyAlgebra(sig, two, ["0", "1"], [two.bottom, two.top], {}, {})
    s = Sequent(frozenset({Eq(x, y)}), Eq(x, z))
    bad = sequent_violation(A, s)
    assert bad is not None and bad["x"] == bad["y"] != bad["z"]


def test_empty_algebra_vacuous():
    A = FuzzyAlgebra(F.SIG_S, H, [], [], {"mul": np.zeros((0, 0), dtype=int)}, {})
    assert satisfies_sequent(A, Sequent(frozenset(), Eq(x, y)))
    assert satisfies_sequent(A, Sequent(frozenset(), Mem(top, x)))
    assert is_model(A, F.semigroups())


def test_invalid_z2_rejected_before_model_check():
    with pytest.raises(OpNotCompatible):
        FuzzyAlgebra(F.SIG_G, H, ["e", "g"], [bot, top], {"mul": [[0, 1], [1, 0]], "inv": [0, 1]},
                     {"e": "e"})


def test_every_algebra_models_empty_theory():
    sig = Signature({"g": 1}, frozenset({"c"}))
    empty = Theory(Language(sig, ("x",)), H, [])
    for A in enumerate_algebras(sig, H, 2):
        assert is_model(A, empty)
    assert model_violation(F.z2_group(), Theory(F.LANG_G, H, [])) is None


@given(algebras(max_size=3), st.data())
def test_sequent_satisfaction_matches_oracle(A, data):
    s = data.draw(sequents(A.frame))
    assert satisfies_sequent(A, s) == oracles.sequent_holds(A, s)


@given(algebras(max_size=3), st.data())
def test_locality_of_satisfaction(A, data):
    s = data.draw(sequents(A.frame))
    used = s.variables()
    for vals in product(range(A.size), repeat=len(LANG.variables)):
        env = dict(zip(LANG.variables, vals))
        ok = all(oracles.holds(A, p, env) for p in s.premises) <= oracles.holds(A, s.conclusion, env)
        if not ok:
            assert not satisfies_sequent(A, s)
            return
    assert satisfies_sequent(A, s) or not used <= set(LANG.variables)


def test_model_mask_matches_is_model():
    algs = list(enumerate_algebras(F.SIG_S, H, 2))
    algs += [F.z2_group()]
    for th in (F.semigroups(), F.left_ideals(), F.ideals()):
        mask = model_mask(algs, th)
        assert mask.tolist() == [is_model(A, th) for A in algs]


def test_model_mask_with_constants():
    algs = [F.z2_group(), F.z2_group(level=top)]
    algs += [FuzzyAlgebra(F.SIG_G, H, ["e"], [l], {"mul": [[0]], "inv": [0]}, {"e": 0}) for l in H.elements]
    for th in (F.groups(), F.groups_literal(), F.normal_groups()):
        assert model_mask(algs, th).tolist() == [is_model(A, th) for A in algs]


# ---------------------------------------------------------------- homomorphisms and satisfaction

@given(algebras(max_size=3), algebras(max_size=3), st.data())
@settings(max_examples=40)
def test_homomorphisms_preserve_and_strong_monos_reflect(A, B, data):
    if A.frame != B.frame:
        return
    phi = data.draw(formulas(A.frame))
    for m in homomorphisms(A, B):
        strong = classify_morphism(m).strong_mono
        for vals in product(range(A.size), repeat=3):
            env = dict(zip(LANG.variables, vals))
            img = {v: m(a) for v, a in env.items()}
            here, there = satisfies(A, phi, env), satisfies(B, phi, img)
            assert not here or there
            if strong:
                assert here == there


# ---------------------------------------------------------------- countermodels

def test_countermodel_for_empty_theory():
    th = Theory(Language(F.SIG_S, ("x", "y")), H, [])
    r = find_countermodel(th, Sequent(frozenset(), Eq(x, y)), 3)
    assert isinstance(r, Countermodel) and r.algebra.size == 2
    assert r.assignment["x"] != r.assignment["y"]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_axiom_instances_have_no_countermodel(n):
    th = F.semigroups()
    inst = Sequent(frozenset(), Eq(parse_term("mul(mul(y, y), z)", th.language),
                                   parse_term("mul(y, mul(y, z))", th.language)))
    assert find_countermodel(th, inst, n) == NoneUpTo(n)


def test_commutativity_countermodel():
    th = F.semigroups()
    r = find_countermodel(th, seq("mul(x, y) == mul(y, x)", th), 3)
    assert isinstance(r, Countermodel)
    A = r.algebra
    assert oracles.model_of(A, th)
    a, b = r.assignment["x"], r.assignment["y"]
    assert A.apply("mul", [a, b]) != A.apply("mul", [b, a])


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25)
def test_countermodel_search_matches_brute_force(seed):
    rng = random.Random(seed)
    sig = Signature({"g": 1}, frozenset({"c"}))
    lang = Language(sig, ("x", "y"))
    from fuzzalg.generate import random_sequent
    th = Theory(lang, chain(2), [random_sequent(rng, lang, chain(2)) for _ in range(2)])
    s = random_sequent(rng, lang, chain(2))
    r = find_countermodel(th, s, 2)
    refuting = [A for A in enumerate_algebras(sig, chain(2), 2, canonical_levels=False)
                if oracles.model_of(A, th) and not oracles.sequent_holds(A, s)]
    if isinstance(r, Countermodel):
        assert oracles.model_of(r.algebra, th) and not oracles.sequent_holds(r.algebra, s)
    else:
        assert refuting == []


# ---------------------------------------------------------------- term and free models

def test_term_model_single_constant():
    lang = Language(Signature({}, frozenset({"a"})), ())
    tm = term_model(Theory(lang, H, []), 2)
    assert tm.reps == [Const("a")] and tm.levels == [bot]
    assert tm.closed and tm.algebra.size == 1


def test_term_model_product_level():
    fm = free_model(F.semigroups(), FuzzySet(H, {"a": h, "b": top}), 3)
    ab = fm.model.class_of(parse_term("mul(a, b)", fm.theory.language))
    assert fm.model.levels[ab] == h


def test_term_model_group_merge():
    fm = free_model(F.groups(), FuzzySet(H, {"c": top}), 2)
    L = fm.theory.language
    assert fm.model.class_of(parse_term("mul(c, inv(c))", L)) == fm.model.class_of(Const("e"))


def test_free_model_empty():
    fm = free_model(F.semigroups(), FuzzySet(H, {}), 3)
    assert fm.model.reps == [] and fm.model.closed
    assert fm.model.algebra.size == 0


def test_free_semigroup_words():
    letters = {"a": h, "b": top}
    fm = free_model(F.semigroups(), FuzzySet(H, letters), 3)
    tm = fm.model
    words = oracles.WordAlgebra(H, letters, 3)
    seen = {}
    for c in tm.interior:
        w = oracles.word_of(tm.reps[c])
        assert tm.levels[c] == words.level(w)
        seen[w] = c
    assert sorted(seen) == sorted(words.words)
    for m, l in letters.items():
        assert l <= fm.unit_level(m)


def test_term_model_levels_match_saturation():
    fm = free_model(F.left_ideals(), FuzzySet(H, {"a": h, "b": top}), 2)
    cl = saturate(fm.theory, 2)
    for c, t in enumerate(fm.model.reps):
        assert fm.model.levels[c] == cl.level_of(cl.class_of(t))


def test_closed_term_model_satisfies_theory():
    th = F.semigroups()
    lang = Language(Signature({"mul": 2}, frozenset({"a"})), th.language.variables)
    ext = Theory(lang, H, list(th.axioms) + [seq("mul(a, a) == a", th.__class__(lang, H, []))])
    tm = term_model(ext, 2)
    assert tm.closed
    assert is_model(tm.algebra, ext)


def test_free_model_universal_property():
    M = FuzzySet(H, {"a": h})
    fm = free_model(F.semigroups(), M, 3)
    tm = fm.model
    inner = tm.interior
    models = list(enumerate_models(F.semigroups(), 3, 1))
    checked = 0
    for A in models:
        for g in range(A.size):
            if not h <= A.mu[g]:
                continue
            ext = []
            for cand in product(range(A.size), repeat=len(inner)):
                vals = dict(zip(inner, cand))
                if vals[fm.unit["a"]] != g:
                    continue
                if any(not tm.levels[c] <= A.mu[vals[c]] for c in inner):
                    continue
                ok = all(vals[r] == A.apply("mul", [vals[p], vals[q]])
                         for (p, q), r in tm.tables["mul"].items() if r in vals)
                if ok:
                    ext.append(cand)
            assert len(ext) == 1
            checked += 1
    assert checked > 100
