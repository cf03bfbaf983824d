"""Finite fuzzy algebras, their morphisms, products, subalgebras and quotients."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import permutations, product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .frame import Frame, FrameElement, FrameMismatch, FuzzySet
from .syntax import Signature


class AlgebraError(ValueError):
    pass


class IncompatibleLevels(AlgebraError):
    """An operation result sits below the meet of its arguments' levels."""


OpNotCompatible = IncompatibleLevels


class MissingConstInterpretation(AlgebraError):
    pass


class EmptyCarrierWithConstants(AlgebraError):
    pass


class NotAHomomorphism(AlgebraError):
    pass


class NotAFuzzyMap(AlgebraError):
    pass


class InvalidCongruence(AlgebraError):
    pass


class NotEpi(AlgebraError):
    pass


class SignatureMismatch(AlgebraError):
    pass


class SizeBoundExceeded(AlgebraError):
    pass


MAX_CONGRUENCE_CARRIER = 9


def _as_table(values, n: int, arity: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.shape != (n,) * arity:
        arr = arr.reshape((n,) * arity)
    return arr


def _meet_levels(frame: Frame, mu: np.ndarray, arity: int) -> np.ndarray:
    """Array of shape (n,)*arity holding the meet of the argument levels."""
    n = len(mu)
    grids = [mu.reshape((1,) * k + (n,) + (1,) * (arity - k - 1)) for k in range(arity)]
    return reduce(lambda a, b: frame.meet_table[a, b], grids) * np.ones((n,) * arity, dtype=np.int64)


class FuzzyAlgebra:
    """A finite algebra with a level per element, closed under its operations.

    Elements are named; internally they are indices into ``carrier``.  Tables
    map index tuples to indices.
    """

    def __init__(self, signature: Signature, frame: Frame, carrier: Sequence[str],
                 mu: Sequence[FrameElement], ops: Mapping[str, object],
                 consts: Mapping[str, int | str], name: str = "", check: bool = True):
        self.signature = signature
        self.frame = frame
        self.carrier = tuple(carrier)
        self.name = name
        n = len(self.carrier)
        if len(set(self.carrier)) != n:
            raise AlgebraError("carrier names repeat")
        self._index = {c: i for i, c in enumerate(self.carrier)}
        self.mu = tuple(frame.own(l) for l in mu)
        if len(self.mu) != n:
            raise AlgebraError("one level per carrier element is required")
        self.mu_idx = np.array([l.id for l in self.mu], dtype=np.int64)
        arity = signature.arities
        if set(ops) != set(arity):
            raise AlgebraError(f"tables given for {sorted(ops)}, signature has {sorted(arity)}")
        self.ops: dict[str, np.ndarray] = {}
        for f, k in arity.items():
            tab = _as_table(ops[f], n, k)
            if tab.size and (tab.min() < 0 or tab.max() >= n):
                raise AlgebraError(f"table of {f} leaves the carrier")
            tab.setflags(write=False)
            self.ops[f] = tab
        if n == 0 and signature.consts:
            raise EmptyCarrierWithConstants("an algebra with constants needs a non-empty carrier")
        if set(consts) != set(signature.consts):
            missing = sorted(set(signature.consts) - set(consts))
            if missing:
                raise MissingConstInterpretation(f"no interpretation for constants {missing}")
            raise AlgebraError(f"constants {sorted(set(consts) - set(signature.consts))} are not in the signature")
        self.consts = {c: self._resolve(v) for c, v in consts.items()}
        self.mu_idx.setflags(write=False)
        if check:
            self.check_levels()

    def _resolve(self, v: int | str) -> int:
        if isinstance(v, str):
            if v not in self._index:
                raise AlgebraError(f"{v!r} is not in the carrier")
            return self._index[v]
        if not 0 <= int(v) < len(self.carrier):
            raise AlgebraError(f"element index {v} out of range")
        return int(v)

    def check_levels(self) -> None:
        bad = self.level_violation()
        if bad is not None:
            f, args = bad
            names = tuple(self.carrier[a] for a in args)
            raise IncompatibleLevels(f"{f}{names} falls below the meet of its arguments' levels")

    def level_violation(self) -> tuple[str, tuple[int, ...]] | None:
        for f, tab in self.ops.items():
            k = tab.ndim
            if tab.size == 0:
                continue
            lower = _meet_levels(self.frame, self.mu_idx, k)
            ok = self.frame.leq_table[lower, self.mu_idx[tab]]
            if not ok.all():
                idx = np.argwhere(~ok)[0]
                return f, tuple(int(i) for i in idx)
        return None

    # ------------------------------------------------------------ access

    def __len__(self) -> int:
        return len(self.carrier)

    @property
    def size(self) -> int:
        return len(self.carrier)

    def index(self, name: str) -> int:
        return self._resolve(name)

    def level(self, a: int | str) -> FrameElement:
        return self.mu[self._resolve(a)]

    def apply(self, f: str, args: Sequence[int]) -> int:
        return int(self.ops[f][tuple(args)])

    def __eq__(self, other) -> bool:
        return (isinstance(other, FuzzyAlgebra) and self.signature == other.signature
                and self.frame == other.frame and self.carrier == other.carrier
                and self.mu == other.mu and self.consts == other.consts
                and all(np.array_equal(self.ops[f], other.ops[f]) for f in self.ops))

    def __hash__(self) -> int:
        return hash(self.encoding())

    def __repr__(self) -> str:
        return f"FuzzyAlgebra({self.name or '?'}, size {self.size})"

    def encoding(self) -> tuple:
        return (tuple(int(x) for x in self.mu_idx),
                tuple(sorted(self.consts.items())),
                tuple((f, tuple(int(x) for x in self.ops[f].ravel())) for f in sorted(self.ops)))

    def renamed(self, names: Sequence[str], name: str | None = None) -> FuzzyAlgebra:
        return FuzzyAlgebra(self.signature, self.frame, names, self.mu, self.ops, self.consts,
                            name=self.name if name is None else name, check=False)

    def permuted(self, perm: Sequence[int]) -> FuzzyAlgebra:
        """The copy in which old element ``i`` sits at position ``perm[i]``."""
        n = self.size
        inv = np.empty(n, dtype=np.int64)
        inv[np.asarray(perm, dtype=np.int64)] = np.arange(n)
        p = np.asarray(perm, dtype=np.int64)
        ops = {}
        for f, tab in self.ops.items():
            ops[f] = p[tab[np.ix_(*([inv] * tab.ndim))]] if tab.ndim else tab
        carrier = [None] * n
        for i, c in enumerate(self.carrier):
            carrier[perm[i]] = c
        mu = [None] * n
        for i, l in enumerate(self.mu):
            mu[perm[i]] = l
        return FuzzyAlgebra(self.signature, self.frame, carrier, mu, ops,
                            {c: int(p[v]) for c, v in self.consts.items()}, name=self.name, check=False)

    def canonical_key(self) -> tuple:
        """Equal exactly for isomorphic algebras (names ignored)."""
        best = None
        for perm in permutations(range(self.size)):
            enc = self.permuted(perm).encoding()
            if best is None or enc < best:
                best = enc
        return (self.size, best)


def constant_algebra(signature: Signature, frame: Frame, level: FrameElement | None = None,
                     name: str = "one") -> FuzzyAlgebra:
    """The one-element algebra, by default at the top level."""
    level = frame.top if level is None else level
    ops = {f: np.zeros((1,) * k, dtype=np.int64) for f, k in signature.ops}
    return FuzzyAlgebra(signature, frame, ["*"], [level], ops, {c: 0 for c in signature.consts},
                        name=name)


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class MorphismKind:
    mono: bool
    epi: bool
    strong_mono: bool
    split_epi: bool

    @property
    def iso(self) -> bool:
        return self.strong_mono and self.epi


class Homomorphism:
    def __init__(self, source: FuzzyAlgebra, target: FuzzyAlgebra, mapping: Sequence[int] | Mapping[str, str],
                 check: bool = True):
        if source.frame != target.frame:
            raise FrameMismatch("homomorphism between algebras over different frames")
        if source.signature != target.signature:
            raise NotAHomomorphism("source and target have different signatures")
        self.source = source
        self.target = target
        if isinstance(mapping, Mapping):
            mapping = [target.index(mapping[c]) for c in source.carrier]
        self.map = np.asarray(mapping, dtype=np.int64).reshape(source.size)
        self.map.setflags(write=False)
        if check:
            reason = self.violation()
            if reason:
                raise NotAHomomorphism(reason)

    def __call__(self, a: int) -> int:
        return int(self.map[a])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Homomorphism) and self.source == other.source
                and self.target == other.target and np.array_equal(self.map, other.map))

    def __hash__(self) -> int:
        return hash(tuple(int(x) for x in self.map))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{a}->{self.target.carrier[b]}" for a, b in zip(self.source.carrier, self.map))
        return f"Homomorphism({pairs})"

    def violation(self) -> str | None:
        A, B, h = self.source, self.target, self.map
        if h.size and (h.min() < 0 or h.max() >= B.size):
            return "map leaves the target carrier"
        for c, a in A.consts.items():
            if h[a] != B.consts[c]:
                return f"constant {c} not preserved"
        for f, tab in A.ops.items():
            if tab.size == 0:
                continue
            lhs = h[tab]
            rhs = B.ops[f][tuple(np.ix_(*([h] * tab.ndim)))]
            if not np.array_equal(lhs, rhs):
                idx = tuple(int(i) for i in np.argwhere(lhs != rhs)[0])
                return f"operation {f} not preserved at {tuple(A.carrier[i] for i in idx)}"
        ok = A.frame.leq_table[A.mu_idx, B.mu_idx[h]] if A.size else np.array([True])
        if not ok.all():
            a = int(np.argwhere(~ok)[0][0])
            return f"level of {A.carrier[a]} decreases"
        return None

    def then(self, other: Homomorphism) -> Homomorphism:
        return Homomorphism(self.source, other.target, other.map[self.map], check=False)

    def image(self) -> frozenset[int]:
        return frozenset(int(x) for x in self.map)


def identity(A: FuzzyAlgebra) -> Homomorphism:
    return Homomorphism(A, A, np.arange(A.size), check=False)


def classify_morphism(h: Homomorphism) -> MorphismKind:
    A, B, m = h.source, h.target, h.map
    injective = len(set(m.tolist())) == A.size
    surjective = len(set(m.tolist())) == B.size
    level_equal = bool(np.all(A.mu_idx == B.mu_idx[m])) if A.size else True
    split = all(any(int(m[a]) == b and A.mu[a] == B.mu[b] for a in range(A.size))
                for b in range(B.size))
    return MorphismKind(mono=injective, epi=surjective, strong_mono=injective and level_equal,
                        split_epi=split)


def homomorphisms(A: FuzzyAlgebra, B: FuzzyAlgebra) -> Iterator[Homomorphism]:
    """All homomorphisms A -> B, by backtracking over the carrier of A."""
    n = A.size
    order = list(range(n))
    fixed = {a: B.consts[c] for c, a in A.consts.items()}
    for a, b in list(fixed.items()):
        if not A.mu[a] <= B.mu[b]:
            return
    choices = [[fixed[a]] if a in fixed else
               [b for b in range(B.size) if A.mu[a] <= B.mu[b]] for a in order]
    ops = list(A.ops.items())

    def consistent(assign: dict[int, int]) -> bool:
        for f, tab in ops:
            k = tab.ndim
            for args in product(assign, repeat=k):
                r = int(tab[args])
                if r in assign and assign[r] != int(B.ops[f][tuple(assign[x] for x in args)]):
                    return False
        return True

    def rec(i: int, assign: dict[int, int]):
        if i == n:
            yield Homomorphism(A, B, [assign[a] for a in range(n)], check=False)
            return
        a = order[i]
        for b in choices[i]:
            assign[a] = b
            if consistent(assign):
                yield from rec(i + 1, assign)
            del assign[a]

    yield from rec(0, {})


def find_isomorphism(A: FuzzyAlgebra, B: FuzzyAlgebra) -> Homomorphism | None:
    if A.size != B.size or sorted(A.mu_idx.tolist()) != sorted(B.mu_idx.tolist()):
        return None
    for h in homomorphisms(A, B):
        if classify_morphism(h).iso:
            return h
    return None


# ---------------------------------------------------------------- constructions

def product_algebra(A: FuzzyAlgebra, B: FuzzyAlgebra) -> tuple[FuzzyAlgebra, Homomorphism, Homomorphism]:
    """The binary product with levels combined by meet, plus both projections."""
    if A.frame != B.frame:
        raise FrameMismatch("product of algebras over different frames")
    if A.signature != B.signature:
        raise SignatureMismatch("product of algebras with different signatures")
    frame = A.frame
    na, nb = A.size, B.size
    pairs = [(a, b) for a in range(na) for b in range(nb)]
    carrier = [f"({A.carrier[a]},{B.carrier[b]})" for a, b in pairs]
    mu = [frame.meet(A.mu[a], B.mu[b]) for a, b in pairs]
    pa = np.array([a for a, _ in pairs], dtype=np.int64)
    pb = np.array([b for _, b in pairs], dtype=np.int64)
    ops = {}
    for f, ta in A.ops.items():
        k = ta.ndim
        grid = np.ix_(*([np.arange(na * nb)] * k))
        ra = ta[tuple(pa[g] for g in grid)]
        rb = B.ops[f][tuple(pb[g] for g in grid)]
        ops[f] = ra * nb + rb
    consts = {c: A.consts[c] * nb + B.consts[c] for c in A.consts}
    P = FuzzyAlgebra(A.signature, frame, carrier, mu, ops, consts,
                     name=f"{A.name or 'A'}x{B.name or 'B'}", check=False)
    return P, Homomorphism(P, A, pa, check=False), Homomorphism(P, B, pb, check=False)


def pairing(f: Homomorphism, g: Homomorphism, P: FuzzyAlgebra) -> Homomorphism:
    """The map into the product induced by two maps out of a common source."""
    nb = g.target.size
    return Homomorphism(f.source, P, f.map * nb + g.map)


def _closure(A: FuzzyAlgebra, seeds: Iterable[int]) -> list[int]:
    members = set(seeds) | set(A.consts.values())
    while True:
        new = set()
        cur = sorted(members)
        for f, tab in A.ops.items():
            for args in product(cur, repeat=tab.ndim):
                r = int(tab[args])
                if r not in members:
                    new.add(r)
        if not new:
            return sorted(members)
        members |= new


def restrict(A: FuzzyAlgebra, elements: Sequence[int], name: str = "") -> tuple[FuzzyAlgebra, Homomorphism]:
    """The strong subalgebra on a subset closed under the operations."""
    elements = sorted(set(elements))
    pos = {a: i for i, a in enumerate(elements)}
    ops = {}
    for f, tab in A.ops.items():
        sub = tab[np.ix_(*([np.array(elements, dtype=np.int64)] * tab.ndim))] if elements else \
            np.zeros((0,) * tab.ndim, dtype=np.int64)
        try:
            ops[f] = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub) if sub.size else sub
        except KeyError:
            raise AlgebraError("subset is not closed under the operations") from None
    S = FuzzyAlgebra(A.signature, A.frame, [A.carrier[a] for a in elements],
                     [A.mu[a] for a in elements], ops, {c: pos[v] for c, v in A.consts.items()},
                     name=name or f"sub({A.name})", check=False)
    return S, Homomorphism(S, A, elements, check=False)


def generated_subalgebra(A: FuzzyAlgebra, source: FuzzySet, f: Mapping[str, int | str]
                         ) -> tuple[FuzzyAlgebra, Homomorphism]:
    """Closure of ``f(source)`` and the constants, with levels inherited from A."""
    if source.frame != A.frame:
        raise FrameMismatch("fuzzy set and algebra use different frames")
    seeds = []
    for b in source:
        a = A.index(f[b]) if isinstance(f[b], str) else int(f[b])
        if not source[b] <= A.mu[a]:
            raise NotAFuzzyMap(f"level of {b} exceeds the level of its image {A.carrier[a]}")
        seeds.append(a)
    return restrict(A, _closure(A, seeds))


def subalgebra_generated_by(A: FuzzyAlgebra, elements: Iterable[int | str]) -> tuple[FuzzyAlgebra, Homomorphism]:
    seeds = [A.index(e) if isinstance(e, str) else int(e) for e in elements]
    return restrict(A, _closure(A, seeds))


def image_factorization(h: Homomorphism) -> tuple[Homomorphism, Homomorphism]:
    """Split h into an epi onto its image followed by a strong mono."""
    Im, m = restrict(h.target, sorted(h.image()), name=f"im({h.source.name})")
    pos = {int(b): i for i, b in enumerate(m.map)}
    e = Homomorphism(h.source, Im, [pos[int(b)] for b in h.map], check=False)
    return e, m


def diagonal_fill(e: Homomorphism, m: Homomorphism, g: Homomorphism, k: Homomorphism
                  ) -> Homomorphism | None:
    """The map d with d.e = g and m.d = k for a commuting square m.g = k.e.

    ``e`` is expected epi and ``m`` strong mono; returns None when no
    homomorphism fills the square.
    """
    if not np.array_equal(m.map[g.map], k.map[e.map]):
        raise NotAHomomorphism("the square does not commute")
    d = [-1] * e.target.size
    for a in range(e.source.size):
        b = int(e.map[a])
        if d[b] not in (-1, int(g.map[a])):
            return None
        d[b] = int(g.map[a])
    if -1 in d:
        return None
    fill = Homomorphism(e.target, g.target, d, check=False)
    if fill.violation() is not None or not np.array_equal(m.map[fill.map], k.map):
        return None
    return fill


# ---------------------------------------------------------------- congruences

@dataclass(frozen=True)
class Congruence:
    """An operation-compatible partition with one level per block."""

    algebra: FuzzyAlgebra
    block_of: tuple[int, ...]
    levels: tuple[FrameElement, ...]

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.levels]
        for a, k in enumerate(self.block_of):
            out[k].append(a)
        return out

    def level_of(self, a: int) -> FrameElement:
        return self.levels[self.block_of[a]]

    def __hash__(self) -> int:
        return hash((self.block_of, self.levels))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Congruence) and self.algebra is other.algebra
                and self.block_of == other.block_of and self.levels == other.levels)


def _normalise_blocks(block_of: Sequence[int]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(b, len(seen)) for b in block_of)


def _compatible_partition(A: FuzzyAlgebra, block_of: Sequence[int]) -> bool:
    cls = np.asarray(block_of, dtype=np.int64)
    for f, tab in A.ops.items():
        if tab.size == 0:
            continue
        image = cls[tab]
        k = tab.ndim
        # f respects the partition iff the class of the result depends only on argument classes
        seen: dict[tuple, int] = {}
        for args in product(range(A.size), repeat=k):
            key = tuple(int(cls[a]) for a in args)
            r = int(image[args])
            if seen.setdefault(key, r) != r:
                return False
    return True


def _levels_violation(A: FuzzyAlgebra, block_of: Sequence[int], levels: Sequence[FrameElement]) -> str | None:
    frame = A.frame
    for a in range(A.size):
        if not A.mu[a] <= levels[block_of[a]]:
            return f"level of {A.carrier[a]} exceeds its block level"
    for f, tab in A.ops.items():
        for args in product(range(A.size), repeat=tab.ndim):
            lo = frame.inf_of(levels[block_of[a]] for a in args)
            if not lo <= levels[block_of[int(tab[args])]]:
                return f"block level of {f}{tuple(A.carrier[a] for a in args)} too low"
    return None


def congruence(A: FuzzyAlgebra, blocks: Iterable[Iterable[int | str]] | Sequence[int],
               levels: Sequence[FrameElement] | Mapping | None = None) -> Congruence:
    """Validate a partition (as blocks or a block index per element) and its levels.

    Without ``levels`` the least admissible ones are used.
    """
    blocks = list(blocks)
    if blocks and all(isinstance(b, (int, np.integer)) for b in blocks):
        raw = [int(b) for b in blocks]
    else:
        raw = [-1] * A.size
        for k, blk in enumerate(blocks):
            for e in blk:
                a = A.index(e) if isinstance(e, str) else int(e)
                if raw[a] != -1:
                    raise InvalidCongruence(f"{A.carrier[a]} lies in two blocks")
                raw[a] = k
        if -1 in raw:
            raise InvalidCongruence("blocks do not cover the carrier")
    if len(raw) != A.size:
        raise InvalidCongruence("partition size differs from the carrier")
    block_of = _normalise_blocks(raw)
    if not _compatible_partition(A, block_of):
        raise InvalidCongruence("partition is not compatible with the operations")
    if levels is None:
        return Congruence(A, block_of, least_levels(A, block_of))
    if isinstance(levels, Mapping):
        levels = [levels[A.carrier[next(a for a in range(A.size) if block_of[a] == k)]]
                  for k in range(max(block_of, default=-1) + 1)]
    else:
        # levels were given in the order of the caller's blocks
        order = {}
        for a, k in enumerate(raw):
            order.setdefault(block_of[a], k)
        levels = [levels[order[k]] for k in range(len(order))]
    levels = tuple(A.frame.own(l) for l in levels)
    reason = _levels_violation(A, block_of, levels)
    if reason:
        raise InvalidCongruence(reason)
    return Congruence(A, block_of, levels)


def least_levels(A: FuzzyAlgebra, block_of: Sequence[int]) -> tuple[FrameElement, ...]:
    """Smallest block levels above A's levels that the operations respect."""
    frame = A.frame
    k = max(block_of, default=-1) + 1
    lv = [frame.bottom] * k
    for a in range(A.size):
        lv[block_of[a]] = lv[block_of[a]] | A.mu[a]
    changed = True
    while changed:
        changed = False
        for f, tab in A.ops.items():
            for args in product(range(A.size), repeat=tab.ndim):
                lo = frame.inf_of(lv[block_of[a]] for a in args)
                tgt = block_of[int(tab[args])]
                if not lo <= lv[tgt]:
                    lv[tgt] = lv[tgt] | lo
                    changed = True
    return tuple(lv)


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length n."""
    def rec(prefix: list[int], top: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from rec(prefix, max(top, b))
            prefix.pop()
    if n == 0:
        yield ()
        return
    yield from rec([0], 0)


def enumerate_congruences(A: FuzzyAlgebra, all_levels: bool = False,
                          max_size: int = MAX_CONGRUENCE_CARRIER) -> list[Congruence]:
    """Every compatible partition with its least levels, or with every admissible level map."""
    if A.size > max_size:
        raise SizeBoundExceeded(f"{A.size} elements exceed the congruence bound {max_size}")
    out = []
    for block_of in set_partitions(A.size):
        if not _compatible_partition(A, block_of):
            continue
        least = least_levels(A, block_of)
        if not all_levels:
            out.append(Congruence(A, block_of, least))
            continue
        k = len(least)
        for levels in product(A.frame.elements, repeat=k):
            if all(lo <= l for lo, l in zip(least, levels)) and \
                    _levels_violation(A, block_of, levels) is None:
                out.append(Congruence(A, block_of, tuple(levels)))
    return out


def quotient(A: FuzzyAlgebra, theta: Congruence) -> tuple[FuzzyAlgebra, Homomorphism]:
    if theta.algebra is not A and theta.algebra != A:
        raise InvalidCongruence("congruence belongs to another algebra")
    blocks = theta.blocks()
    reps = [b[0] for b in blocks]
    cls = np.asarray(theta.block_of, dtype=np.int64)
    ops = {}
    for f, tab in A.ops.items():
        r = np.array(reps, dtype=np.int64)
        ops[f] = cls[tab[np.ix_(*([r] * tab.ndim))]] if reps else np.zeros((0,) * tab.ndim, dtype=np.int64)
    carrier = ["[" + ",".join(A.carrier[a] for a in b) + "]" for b in blocks]
    Q = FuzzyAlgebra(A.signature, A.frame, carrier, theta.levels, ops,
                     {c: int(cls[v]) for c, v in A.consts.items()}, name=f"{A.name}/~", check=False)
    return Q, Homomorphism(A, Q, cls, check=False)


def kernel_congruence(e: Homomorphism) -> Congruence:
    """Identify elements with equal images; a block's level is its image's level."""
    if not classify_morphism(e).epi:
        raise NotEpi("kernel congruence needs a surjective homomorphism")
    raw = [int(b) for b in e.map]
    block_of = _normalise_blocks(raw)
    levels = [None] * (max(block_of, default=-1) + 1)
    for a, k in enumerate(block_of):
        levels[k] = e.target.mu[raw[a]]
    return Congruence(e.source, block_of, tuple(levels))


# ---------------------------------------------------------------- enumeration

def level_sequences(frame: Frame, n: int, canonical: bool = True) -> Iterator[tuple[FrameElement, ...]]:
    """Level assignments for n elements; sorted along a linear extension when canonical."""
    elems = sorted(frame.elements, key=lambda l: frame.rank[l.id])
    if not canonical:
        yield from product(frame.elements, repeat=n)
        return

    def rec(start: int, acc: list):
        if len(acc) == n:
            yield tuple(acc)
            return
        for k in range(start, len(elems)):
            acc.append(elems[k])
            yield from rec(k, acc)
            acc.pop()
    yield from rec(0, [])


def enumerate_structures(signature: Signature, n: int,
                         table_filter: Callable[[dict, int], bool] | None = None
                         ) -> Iterator[tuple[dict, dict]]:
    """All (tables, constants) pairs on the carrier ``range(n)``.

    ``table_filter`` prunes operation tables before constants are chosen.
    """
    const_names = sorted(signature.consts)
    if n == 0 and const_names:
        return
    op_list = list(signature.ops)
    tables_per_op = [list(product(range(n), repeat=n ** k)) if n else [()] for _, k in op_list]
    for tabs in product(*tables_per_op):
        ops = {f: np.array(tab, dtype=np.int64).reshape((n,) * k)
               for (f, k), tab in zip(op_list, tabs)}
        if table_filter is not None and not table_filter(ops, n):
            continue
        for consts in product(range(n), repeat=len(const_names)):
            yield ops, dict(zip(const_names, consts))


def enumerate_algebras(signature: Signature, frame: Frame, max_size: int, min_size: int = 0,
                       structure_filter: Callable[[dict, dict, int], bool] | None = None,
                       canonical_levels: bool = True,
                       table_filter: Callable[[dict, int], bool] | None = None
                       ) -> Iterator[FuzzyAlgebra]:
    """Every fuzzy algebra up to ``max_size`` elements in a deterministic order.

    With ``canonical_levels`` the level sequence is sorted, which still covers
    every algebra up to isomorphism.
    """
    for n in range(min_size, max_size + 1):
        carrier = [f"e{i}" for i in range(n)]
        for ops, consts in enumerate_structures(signature, n, table_filter):
            if structure_filter is not None and not structure_filter(ops, consts, n):
                continue
            for mu in level_sequences(frame, n, canonical_levels):
                A = FuzzyAlgebra(signature, frame, carrier, mu, ops, consts, check=False)
                if A.level_violation() is None:
                    yield A


def dedupe_isomorphic(algebras: Iterable[FuzzyAlgebra]) -> list[FuzzyAlgebra]:
    seen = set()
    out = []
    for A in algebras:
        k = A.canonical_key()
        if k not in seen:
            seen.add(k)
            out.append(A)
    return out
