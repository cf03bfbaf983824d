from itertools import product

import pytest

from fuzzalg import fixtures as F
from fuzzalg.algebra import (FuzzyAlgebra, NotEpi, NotAFuzzyMap, SignatureMismatch,
                             constant_algebra, dedupe_isomorphic, enumerate_algebras,
                             product_algebra)
from fuzzalg.frame import FuzzySet
from fuzzalg.hsp import (SupportNotEmpty, XEquation, closure_check, equation_to_theory,
                         equation_violation, satisfies_equation, unconditional_equation_to_theory,
                         witness_terms)
from fuzzalg.logic import Eq, classify_theory
from fuzzalg.semantics import enumerate_models, is_model, model_mask
from fuzzalg.syntax import Signature, Var, parse_term

import oracles
from acceptance_pools import equations

H = F.H3()
h, top, bot = H["h"], H.top, H.bottom
EMPTY = Signature({}, frozenset())


def magma(carrier, mu, table):
    return FuzzyAlgebra(F.SIG_S, H, carrier, mu, {"mul": table}, {})


LEFT_ZERO3 = magma(["a", "b", "c"], [top] * 3, [[0, 0, 0], [1, 1, 1], [2, 2, 2]])
NULL3 = [[2, 2, 2], [2, 2, 2], [2, 2, 2]]


def pool():
    return {e.name: e for e in equations()}


@pytest.fixture(scope="module")
def small_magmas():
    return list(enumerate_algebras(F.SIG_S, H, 2))


# ---------------------------------------------------------------- equations

def test_generation_enforced():
    with pytest.raises(NotEpi):
        XEquation(FuzzySet(H, {"x": bot}), magma(["p", "q"], [top, top], [[0, 0], [0, 0]]),
                  {"x": "p"})
    with pytest.raises(NotAFuzzyMap):
        XEquation(FuzzySet(H, {"x": top}), magma(["p"], [h], [[0]]), {"x": "p"})


def test_unconstrained_equation():
    sig = EMPTY
    B = FuzzyAlgebra(sig, H, ["p"], [bot], {}, {})
    e = XEquation(FuzzySet(H, {"x": bot}), B, {"x": "p"})
    th = equation_to_theory(e)
    assert th.axioms == ()
    for n in range(4):
        for mu in product(H.elements, repeat=n):
            A = FuzzyAlgebra(sig, H, [str(i) for i in range(n)], mu, {}, {})
            assert satisfies_equation(A, e) and is_model(A, th)


def test_null_equation_fails_on_left_zero_band():
    e = pool()["null3"]
    bad = equation_violation(LEFT_ZERO3, e)
    assert bad is not None
    a, b = bad["x"], bad["y"]
    assert LEFT_ZERO3.apply("mul", [a, b]) != LEFT_ZERO3.apply("mul", [b, a]) or a != b


def test_null_equation_theory_forces_commutativity():
    th = equation_to_theory(pool()["null3"])
    texts = {str(ax.conclusion) for ax in th.axioms}
    assert "mul(x, y) == mul(x, x)" in texts and "mul(y, x) == mul(x, x)" in texts
    for A in enumerate_models(th, 3):
        assert all(A.apply("mul", [a, b]) == A.apply("mul", [b, a])
                   for a, b in product(range(A.size), repeat=2))


def test_level_equation():
    e = pool()["square_top"]
    low = magma(["u"], [h], [[0]])
    assert not satisfies_equation(low, e)
    assert satisfies_equation(magma(["u"], [top], [[0]]), e)


def test_witness_terms_minimal():
    t = witness_terms(pool()["nilpotent3"])
    assert [str(x) for x in t] == ["x", "mul(x, x)", "mul(x, mul(x, x))"]


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        satisfies_equation(F.z2_group(), pool()["z2"])


def test_classification_of_translations():
    for e in equations():
        th = equation_to_theory(e)
        supp = [x for x in e.generators if e.generators[x] != bot]
        expected = "type_E" if supp else "unconditional"
        assert classify_theory(th).label == expected
        assert all(len(ax.premises) <= len(supp) for ax in th.axioms)


def test_unconditional_translation():
    e = pool()["null3"]
    th = unconditional_equation_to_theory(e)
    assert classify_theory(th).label == "unconditional"
    with pytest.raises(SupportNotEmpty):
        unconditional_equation_to_theory(pool()["z2"])


@pytest.mark.parametrize("name", sorted(pool()))
def test_equation_theory_equivalence_small(name, small_magmas):
    e = pool()[name]
    th = equation_to_theory(e)
    mask = model_mask(small_magmas, th)
    for A, m in zip(small_magmas, mask):
        assert satisfies_equation(A, e) == bool(m) == oracles.model_of(A, th)


def test_equation_oracle_for_one_case(small_magmas):
    e = pool()["left_zero"]
    for A in small_magmas:
        direct = all(A.apply("mul", [a, b]) == a for a, b in product(range(A.size), repeat=2))
        assert satisfies_equation(A, e) == direct


# ---------------------------------------------------------------- closure

def test_single_algebra_fails_products():
    A = magma(["0", "1"], [top, top], [[0, 0], [0, 1]])
    rep = closure_check([A])
    assert rep.flag("products") is False
    w = rep.violations["products"][0]
    assert w.algebra.size == 4


def test_witnesses_revalidate():
    fam = [magma(["0", "1"], [h, top], [[0, 0], [0, 1]]), constant_algebra(F.SIG_S, H)]
    keys = {A.canonical_key() for A in fam}
    rep = closure_check(fam, "HSP_epi")
    assert not rep.passed
    for check, ws in rep.violations.items():
        for w in ws:
            assert w.algebra.canonical_key() not in keys
            if w.construction == "product":
                i, j = (int(s[1:]) for s in w.sources)
                P, _, _ = product_algebra(fam[i], fam[j])
                assert P == w.algebra


def test_semigroup_models_closed_size_two():
    fam = dedupe_isomorphic(enumerate_models(F.semigroups(), 2))
    th = F.semigroups()
    for mode in ("HSP_epi", "HSP_split"):
        rep = closure_check(fam, mode, member=lambda A: is_model(A, th))
        assert rep.passed and not rep.findings


def test_modes_differ_on_left_ideals():
    th = F.left_ideals()
    fam = dedupe_isomorphic(enumerate_models(th, 2))
    member = lambda A: is_model(A, th)
    split = closure_check(fam, "HSP_split", member=member)
    assert split.passed
    assert split.flag("epi_images") is None
    epi = closure_check(fam, "HSP_epi", member=member)
    assert epi.flag("split_epi_images") is True
    assert len(epi.violations["epi_images"]) == len(split.findings) > 0


def test_bad_mode():
    with pytest.raises(ValueError):
        closure_check([], "HSP")
