import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fuzzalg
from fuzzalg import fixtures as F
from fuzzalg.algebra import dedupe_isomorphic
from fuzzalg.dsl import parse_workspace
from fuzzalg.frame import FuzzySet
from fuzzalg.generate import DerivationConfig, random_algebra, random_derivation, theory_satisfied_by
from fuzzalg.hsp import closure_check
from fuzzalg.logic import Eq, Sequent, Theory
from fuzzalg.proof import check_derivation
from fuzzalg.semantics import enumerate_models, find_countermodel, free_model, is_model
from fuzzalg.serialize import (FormatError, closure_report_from_json, closure_report_to_json,
                               countermodel_text, countermodel_to_json, derivation_from_json,
                               derivation_to_json, dumps_derivation, loads_derivation,
                               term_model_from_json, term_model_to_json)
from fuzzalg.syntax import Language, Var

from strategies import LANG, SIG

DATA = Path(fuzzalg.__file__).parent / "data"
H = F.H3()


@pytest.mark.parametrize("fname, theory, build", [
    ("unit_membership.json", F.groups, F.unit_membership),
    ("normal_converse.json", F.normal_groups, F.normal_converse),
])
def test_bundled_derivations_match_builders(fname, theory, build):
    th = theory()
    d = loads_derivation((DATA / fname).read_text(), th)
    assert d == build()
    assert check_derivation(th, d) == build().conclusion


@given(st.integers(0, 10**9))
@settings(max_examples=30)
def test_derivation_round_trip(seed):
    rng = random.Random(seed)
    A = random_algebra(rng, SIG, H, 3)
    th = theory_satisfied_by(rng, A, LANG)
    d = random_derivation(rng, th, DerivationConfig(steps=60))
    again = derivation_from_json(json.loads(json.dumps(derivation_to_json(d))), th)
    assert again == d
    assert check_derivation(th, again) == d.conclusion


def test_derivation_format_errors():
    th = F.groups()
    with pytest.raises(FormatError) as exc:
        derivation_from_json({"rule": "Nope", "conclusion": "|- e == e"}, th)
    assert "root" in str(exc.value) or "Nope" in str(exc.value)
    bad = json.loads(dumps_derivation(F.unit_membership()))
    bad["premises"][0]["rule"] = "Bogus"
    with pytest.raises(FormatError):
        derivation_from_json(bad, th)


def test_term_model_round_trip():
    fm = free_model(F.semigroups(), FuzzySet(H, {"a": H["h"], "b": H.top}), 3)
    data = json.loads(json.dumps(term_model_to_json(fm.model)))
    tm = term_model_from_json(data, fm.theory)
    assert tm.reps == fm.model.reps and tm.levels == fm.model.levels
    assert tm.frontier == fm.model.frontier and tm.tables == fm.model.tables
    assert data["closed"] is False and sum(c["frontier"] for c in data["classes"]) > 0


def test_closure_report_round_trip():
    th = F.left_ideals()
    fam = dedupe_isomorphic(enumerate_models(th, 2))
    rep = closure_check(fam, "HSP_split", member=lambda A: is_model(A, th))
    again = closure_report_from_json(json.loads(json.dumps(closure_report_to_json(rep))))
    assert again.checked == rep.checked and again.mode == rep.mode
    assert [w.algebra for w in again.findings] == [w.algebra for w in rep.findings]


def test_countermodel_text_is_loadable():
    th = Theory(Language(F.SIG_S, ("x", "y")), H, [])
    res = find_countermodel(th, Sequent(frozenset(), Eq(Var("x"), Var("y"))), 2)
    ws = parse_workspace(countermodel_text(res))
    A = next(iter(ws.models.values()))
    a = ws.assignments["witness"]
    assert A == res.algebra.renamed(res.algebra.carrier, A.name)
    assert a.values == res.named_assignment()
    data = countermodel_to_json(res)
    assert data["result"] == "countermodel"
