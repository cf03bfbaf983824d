"""Equations over fuzzy generators, their theories, and closure checks on families."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import (FuzzyAlgebra, NotAFuzzyMap, NotEpi, SignatureMismatch, classify_morphism,
                      enumerate_congruences, product_algebra, quotient, restrict, _closure)
from .frame import FrameMismatch, FuzzySet
from .logic import Eq, Mem, Sequent, Theory
from .syntax import App, Const, Language, NameClash, Term, Var


class SupportNotEmpty(ValueError):
    pass


@dataclass(frozen=True)
class XEquation:
    """Generators with levels, a target algebra they generate, and the valuation."""

    generators: FuzzySet
    target: FuzzyAlgebra
    valuation: Mapping[str, int]
    name: str = ""

    def __post_init__(self):
        B = self.target
        if self.generators.frame != B.frame:
            raise FrameMismatch("generators and target use different frames")
        val = {}
        for x in self.generators:
            if x not in self.valuation:
                raise ValueError(f"generator {x} has no value")
            v = self.valuation[x]
            val[x] = B.index(v) if isinstance(v, str) else int(v)
            if not self.generators[x] <= B.mu[val[x]]:
                raise NotAFuzzyMap(f"level of generator {x} exceeds that of {B.carrier[val[x]]}")
        extra = set(self.valuation) - set(self.generators)
        if extra:
            raise ValueError(f"valuation names unknown generators {sorted(extra)}")
        object.__setattr__(self, "valuation", val)
        if len(_closure(B, val.values())) != B.size:
            raise NotEpi("the generators and constants do not generate the target")

    def __hash__(self) -> int:
        return hash((self.generators, self.target, tuple(sorted(self.valuation.items()))))


def fuzzy_assignments(e: XEquation, A: FuzzyAlgebra):
    xs = sorted(e.generators)
    pools = [[a for a in range(A.size) if e.generators[x] <= A.mu[a]] for x in xs]
    for combo in product(*pools):
        yield dict(zip(xs, combo))


def extend_assignment(e: XEquation, A: FuzzyAlgebra, h: Mapping[str, int]) -> list[int] | None:
    """The homomorphism B -> A through ``h``, or None when none exists."""
    B = e.target
    q: dict[int, int] = {}

    def put(b: int, a: int) -> bool:
        if q.setdefault(b, a) != a:
            return False
        return True

    for x, b in e.valuation.items():
        if not put(b, h[x]):
            return None
    for c, b in B.consts.items():
        if not put(b, A.consts[c]):
            return None
    changed = True
    while changed:
        changed = False
        known = sorted(q)
        for f, tab in B.ops.items():
            for args in product(known, repeat=tab.ndim):
                r = int(tab[args])
                val = A.apply(f, [q[b] for b in args])
                if r in q:
                    if q[r] != val:
                        return None
                else:
                    q[r] = val
                    changed = True
    if len(q) != B.size:
        return None
    for b in range(B.size):
        if not B.mu[b] <= A.mu[q[b]]:
            return None
    return [q[b] for b in range(B.size)]


def equation_violation(A: FuzzyAlgebra, e: XEquation) -> dict[str, int] | None:
    if A.frame != e.target.frame:
        raise FrameMismatch("algebra and equation use different frames")
    if A.signature != e.target.signature:
        raise SignatureMismatch("algebra and equation use different signatures")
    for h in fuzzy_assignments(e, A):
        if extend_assignment(e, A, h) is None:
            return h
    return None


def satisfies_equation(A: FuzzyAlgebra, e: XEquation) -> bool:
    return equation_violation(A, e) is None


def witness_terms(e: XEquation) -> list[Term]:
    """For each element of the target, the least term (in the term order) naming it."""
    B = e.target
    best: list[Term | None] = [None] * B.size

    def offer(b: int, t: Term) -> bool:
        if best[b] is None or t < best[b]:
            best[b] = t
            return True
        return False

    for x, b in e.valuation.items():
        offer(b, Var(x))
    for c, b in B.consts.items():
        offer(b, Const(c))
    changed = True
    while changed:
        changed = False
        known = [b for b in range(B.size) if best[b] is not None]
        for f, tab in sorted(B.ops.items()):
            for args in product(known, repeat=tab.ndim):
                if offer(int(tab[args]), App(f, tuple(best[a] for a in args))):
                    changed = True
    return best


def equation_to_theory(e: XEquation, name: str = "") -> Theory:
    """Axioms whose models are exactly the algebras satisfying ``e``.

    Every axiom has the same premises: one membership per generator with a
    level above bottom.
    """
    B = e.target
    frame = B.frame
    xs = sorted(e.generators)
    clash = set(xs) & B.signature.symbols()
    if clash:
        raise NameClash(f"generator names clash with symbols: {sorted(clash)}")
    lang = Language(B.signature, tuple(xs))
    gamma = frozenset(Mem(e.generators[x], Var(x)) for x in xs if e.generators[x] != frame.bottom)
    t = witness_terms(e)
    axioms = []

    def add(phi):
        if phi in gamma or isinstance(phi, Eq) and phi.lhs == phi.rhs \
                or isinstance(phi, Mem) and phi.level == frame.bottom:
            return
        axioms.append(Sequent(gamma, phi))

    for x in xs:
        add(Eq(Var(x), t[e.valuation[x]]))
    for c in sorted(B.consts):
        add(Eq(t[B.consts[c]], Const(c)))
    for b in range(B.size):
        add(Mem(B.mu[b], t[b]))
    for f, tab in sorted(B.ops.items()):
        for args in product(range(B.size), repeat=tab.ndim):
            add(Eq(App(f, tuple(t[a] for a in args)), t[int(tab[args])]))
    return Theory(lang, frame, axioms, name=name or f"th({e.name})")


def unconditional_equation_to_theory(e: XEquation, name: str = "") -> Theory:
    frame = e.target.frame
    if any(e.generators[x] != frame.bottom for x in e.generators):
        raise SupportNotEmpty("generators above bottom give premises; use equation_to_theory")
    return equation_to_theory(e, name=name)


# ---------------------------------------------------------------- closure checks

@dataclass
class Witness:
    construction: str            # product, subalgebra, epi_image or split_epi_image
    sources: tuple[str, ...]
    algebra: FuzzyAlgebra
    detail: str = ""


@dataclass
class ClosureReport:
    mode: str
    checked: dict[str, int] = field(default_factory=dict)
    violations: dict[str, list[Witness]] = field(default_factory=dict)
    findings: list[Witness] = field(default_factory=list)   # reported only, never failing

    def flag(self, check: str) -> bool | None:
        if check not in self.checked:
            return None
        return not self.violations.get(check)

    @property
    def passed(self) -> bool:
        return all(not v for v in self.violations.values())

    def flags(self) -> dict[str, bool | None]:
        return {c: self.flag(c) for c in ("products", "subalgebras", "epi_images", "split_epi_images")}


MODES = ("HSP_epi", "HSP_split")


def closure_check(family: Sequence[FuzzyAlgebra], mode: str = "HSP_epi",
                  member: Callable[[FuzzyAlgebra], bool] | None = None,
                  max_product_size: int | None = None,
                  checks: Iterable[str] = ("products", "subalgebras", "images")) -> ClosureReport:
    """Check a finite family for closure under products, strong subalgebras and images.

    Membership is decided by ``member`` when given, otherwise by isomorphism
    with a family element.  In ``HSP_split`` mode only split-epi images must
    stay inside; other epi images that leave the family are listed as findings.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if member is None:
        keys = {A.canonical_key() for A in family}

        def member(A: FuzzyAlgebra) -> bool:
            return A.canonical_key() in keys
    checks = set(checks)
    report = ClosureReport(mode)
    label = [A.name or f"#{i}" for i, A in enumerate(family)]

    def note(check: str, w: Witness | None):
        report.checked[check] = report.checked.get(check, 0) + 1
        report.violations.setdefault(check, [])
        if w is not None:
            report.violations[check].append(w)

    if "products" in checks:
        for i, A in enumerate(family):
            for j in range(i, len(family)):
                B = family[j]
                if max_product_size is not None and A.size * B.size > max_product_size:
                    continue
                P, _, _ = product_algebra(A, B)
                note("products", None if member(P) else Witness("product", (label[i], label[j]), P))
    if "subalgebras" in checks:
        for i, A in enumerate(family):
            seen = set()
            for mask in range(1 << A.size):
                seeds = [a for a in range(A.size) if mask >> a & 1]
                elems = tuple(_closure(A, seeds))
                if elems in seen:
                    continue
                seen.add(elems)
                S, _ = restrict(A, elems)
                note("subalgebras", None if member(S) else
                     Witness("subalgebra", (label[i],), S, f"on {[A.carrier[a] for a in elems]}"))
    if "images" in checks:
        for i, A in enumerate(family):
            for theta in enumerate_congruences(A, all_levels=True):
                Q, proj = quotient(A, theta)
                split = classify_morphism(proj).split_epi
                ok = member(Q)
                if split:
                    note("split_epi_images", None if ok else Witness("split_epi_image", (label[i],), Q))
                if mode == "HSP_epi":
                    note("epi_images", None if ok else Witness("epi_image", (label[i],), Q))
                elif not ok and not split:
                    report.findings.append(Witness("epi_image", (label[i],), Q,
                                                   "non-split epi image outside the family"))
    return report
