"""Hypothesis strategies for frames, terms, formulas and small algebras."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from fuzzalg.frame import boolean, chain
from fuzzalg.generate import random_algebra, random_sequent
from fuzzalg.logic import Eq, Mem
from fuzzalg.syntax import App, Const, Language, Signature, Var

FRAMES = [chain(1), chain(2), chain(3), chain(4), boolean(2), boolean(3)]
frames = st.sampled_from(FRAMES)

SIG = Signature({"f": 2, "g": 1}, frozenset({"c"}))
LANG = Language(SIG, ("x", "y", "z"))


def terms(lang: Language = LANG, max_leaves: int = 8, variables=None):
    names = lang.variables if variables is None else variables
    leaves = [Var(x) for x in names] + [Const(c) for c in sorted(lang.signature.consts)]
    ops = list(lang.signature.ops)

    def extend(children):
        return st.one_of(*[st.tuples(*[children] * k).map(lambda args, f=f: App(f, args))
                           for f, k in ops])
    return st.recursive(st.sampled_from(leaves), extend, max_leaves=max_leaves)


ground_terms = terms(variables=())


def formulas(frame, lang: Language = LANG, term_strategy=None):
    ts = term_strategy or terms(lang)
    return st.one_of(st.builds(Eq, ts, ts), st.builds(Mem, st.sampled_from(frame.elements), ts))


def substitutions(lang: Language = LANG):
    return st.dictionaries(st.sampled_from(lang.variables), terms(lang, max_leaves=4), max_size=3)


@st.composite
def algebras(draw, signature=SIG, frame_strategy=frames, max_size: int = 3, min_size: int = 1):
    frame = draw(frame_strategy)
    seed = draw(st.integers(0, 2**32 - 1))
    return random_algebra(random.Random(seed), signature, frame, max_size, min_size)


@st.composite
def sequents(draw, frame, lang: Language = LANG):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_sequent(random.Random(seed), lang, frame)
