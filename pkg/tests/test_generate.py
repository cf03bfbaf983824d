import os
import random
import subprocess
import sys

from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzalg.frame import chain, validate_frame
from fuzzalg.generate import (DerivationConfig, raise_levels, random_algebra, random_derivation,
                              random_frame, random_signature, small_frames, subdivide_context,
                              theory_satisfied_by)
from fuzzalg.logic import Eq, Mem, Sequent
from fuzzalg.proof import Sub, check_derivation
from fuzzalg.semantics import is_model
from fuzzalg.syntax import Language, Var

import oracles


def test_small_frames_are_distributive_and_distinct():
    fs = small_frames(4)
    assert [len(f) for f in fs] == [1, 2, 3, 4, 4]
    assert len({f for f in fs}) == 5
    for f in fs:
        validate_frame(f.names, f.leq_table)


@given(st.integers(0, 10**9))
def test_random_algebra_is_valid(seed):
    rng = random.Random(seed)
    fr = random_frame(rng)
    sig = random_signature(rng)
    A = random_algebra(rng, sig, fr, 4)
    assert A.level_violation() is None
    assert 1 <= len(sig.ops) <= 2 and len(sig.consts) <= 1


def test_raise_levels_is_least():
    rng = random.Random(1)
    fr = small_frames(3)[2]
    for _ in range(30):
        sig = random_signature(rng)
        A = random_algebra(rng, sig, fr, 3)
        start = [rng.randrange(len(fr)) for _ in range(A.size)]
        mu = raise_levels(fr, A.ops, start)
        assert all(fr.leq_table[a, b] for a, b in zip(start, mu))
        # lowering any single element below its raised value breaks compatibility or the floor
        for i in range(A.size):
            for l in range(len(fr)):
                if fr.leq_table[l, mu[i]] and l != mu[i] and fr.leq_table[start[i], l]:
                    trial = list(mu)
                    trial[i] = l
                    assert raise_levels(fr, A.ops, trial) != trial


@given(st.integers(0, 10**9), st.booleans())
@settings(max_examples=40)
def test_generated_triples(seed, allow_sub):
    rng = random.Random(seed)
    fr = random_frame(rng)
    sig = random_signature(rng)
    A = random_algebra(rng, sig, fr, 4)
    th = theory_satisfied_by(rng, A, Language(sig, ("x", "y", "z")))
    assert is_model(A, th) and oracles.model_of(A, th)
    d = random_derivation(rng, th, DerivationConfig(allow_sub=allow_sub))
    check_derivation(th, d)
    assert d.depth() <= DerivationConfig().max_depth
    if not allow_sub:
        assert not d.uses(Sub)


def test_derivations_reach_depth():
    depths = []
    for seed in range(40):
        rng = random.Random(seed)
        fr = random_frame(rng)
        sig = random_signature(rng)
        A = random_algebra(rng, sig, fr, 3)
        th = theory_satisfied_by(rng, A, Language(sig, ("x", "y", "z")))
        depths.append(random_derivation(rng, th).depth())
    assert max(depths) >= 5 and min(depths) >= 1


def test_subdivide_context_partitions():
    rng = random.Random(0)
    c = chain(2)
    s = Sequent(frozenset({Eq(Var("x"), Var("y")), Mem(c.top, Var("x"))}), Eq(Var("y"), Var("x")))
    for _ in range(20):
        g, rest = subdivide_context(rng, s)
        assert g | rest == s.premises and not g & rest


_SEEDED_RUN = """
import random
from fuzzalg.generate import random_algebra, random_derivation, random_frame, random_signature, theory_satisfied_by
from fuzzalg.syntax import Language
for seed in range(30):
    rng = random.Random(seed)
    A = random_algebra(rng, random_signature(rng), random_frame(rng), 4)
    th = theory_satisfied_by(rng, A, Language(A.signature, ("x", "y", "z")))
    print(random_derivation(rng, th).conclusion)
"""


def test_generation_ignores_hash_seed():
    def run(hash_seed):
        env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
        return subprocess.run([sys.executable, "-c", _SEEDED_RUN], env=env, check=True,
                              capture_output=True, text=True).stdout
    assert run(1) == run(2)
