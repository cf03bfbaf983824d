"""Finite distributive lattices of truth levels."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np


class FrameError(ValueError):
    pass


class NotPartialOrder(FrameError):
    def __init__(self, law: str, witness: tuple[str, ...]):
        super().__init__(f"leq is not {law}: witness {witness}")
        self.law = law
        self.witness = witness


class NoMeetOrJoin(FrameError):
    def __init__(self, kind: str, pair: tuple[str, str]):
        super().__init__(f"no {kind} for {pair}")
        self.kind = kind
        self.pair = pair


class NotDistributive(FrameError):
    def __init__(self, triple: tuple[str, str, str]):
        super().__init__(f"distributivity fails at {triple}")
        self.triple = triple


class FrameMismatch(FrameError):
    pass


@dataclass(frozen=True)
class FrameElement:
    """A level of one particular frame; comparing levels of different frames fails."""

    frame: Frame = field(repr=False)
    id: int

    @property
    def name(self) -> str:
        return self.frame.names[self.id]

    def _same(self, other: FrameElement) -> None:
        if not isinstance(other, FrameElement) or other.frame != self.frame:
            raise FrameMismatch(f"{self!r} and {other!r} live in different frames")

    def __le__(self, other: FrameElement) -> bool:
        self._same(other)
        return bool(self.frame.leq_table[self.id, other.id])

    def __ge__(self, other: FrameElement) -> bool:
        return other <= self

    def __lt__(self, other: FrameElement) -> bool:
        return self <= other and self != other

    def __gt__(self, other: FrameElement) -> bool:
        return other < self

    def __and__(self, other: FrameElement) -> FrameElement:
        return self.frame.meet(self, other)

    def __or__(self, other: FrameElement) -> FrameElement:
        return self.frame.join(self, other)

    def __repr__(self) -> str:
        return self.name

    __str__ = __repr__


class Frame:
    """A validated finite distributive lattice.

    Frames compare by their level names and order table.  Use
    :func:`validate_frame` to build one.
    """

    def __init__(self, name: str, names: Sequence[str], leq: np.ndarray,
                 meet: np.ndarray, join: np.ndarray, bottom: int, top: int):
        self.name = name
        self.names = tuple(names)
        self.leq_table = leq
        self.meet_table = meet
        self.join_table = join
        self.elements = tuple(FrameElement(self, i) for i in range(len(names)))
        self.bottom = self.elements[bottom]
        self.top = self.elements[top]
        self._index = {n: i for i, n in enumerate(self.names)}
        self._hash = hash((self.names, leq.tobytes()))
        # any linear extension of leq; used to canonicalise level sequences
        self.rank = tuple(int(x) for x in np.argsort(np.argsort(leq.sum(axis=0), kind="stable"), kind="stable"))
        for arr in (leq, meet, join):
            arr.setflags(write=False)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, Frame) and self.names == other.names
                and np.array_equal(self.leq_table, other.leq_table))

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return isinstance(x, FrameElement) and x.frame == self

    def __repr__(self) -> str:
        return f"Frame({self.name}: {' '.join(self.names)})"

    def __getitem__(self, name: str) -> FrameElement:
        try:
            return self.elements[self._index[name]]
        except KeyError:
            raise KeyError(f"frame {self.name} has no level {name!r}") from None

    def own(self, x: FrameElement) -> FrameElement:
        if x not in self:
            raise FrameMismatch(f"{x!r} is not a level of {self.name}")
        return x

    def leq(self, a: FrameElement, b: FrameElement) -> bool:
        return bool(self.leq_table[self.own(a).id, self.own(b).id])

    def meet(self, a: FrameElement, b: FrameElement) -> FrameElement:
        return self.elements[self.meet_table[self.own(a).id, self.own(b).id]]

    def join(self, a: FrameElement, b: FrameElement) -> FrameElement:
        return self.elements[self.join_table[self.own(a).id, self.own(b).id]]

    def inf_of(self, levels: Iterable[FrameElement]) -> FrameElement:
        acc = self.top
        for x in levels:
            acc = self.meet(acc, x)
        return acc

    def sup_of(self, levels: Iterable[FrameElement]) -> FrameElement:
        acc = self.bottom
        for x in levels:
            acc = self.join(acc, x)
        return acc


def validate_frame(names: Sequence[str], leq: Sequence[Sequence[bool]] | np.ndarray,
                   name: str = "frame") -> Frame:
    """Check a raw order table and build its frame.

    ``leq[i][j]`` is read as ``names[i] <= names[j]``.
    """
    names = tuple(names)
    n = len(names)
    if n == 0:
        raise NotPartialOrder("non-empty", ())
    if len(set(names)) != n:
        raise FrameError(f"duplicate level names in {names}")
    table = np.array(leq, dtype=bool).reshape(n, n)
    for i in range(n):
        if not table[i, i]:
            raise NotPartialOrder("reflexive", (names[i],))
    for i, j in product(range(n), repeat=2):
        if i != j and table[i, j] and table[j, i]:
            raise NotPartialOrder("antisymmetric", (names[i], names[j]))
    for i, j, k in product(range(n), repeat=3):
        if table[i, j] and table[j, k] and not table[i, k]:
            raise NotPartialOrder("transitive", (names[i], names[j], names[k]))

    def bound(i: int, j: int, upper: bool) -> int:
        if upper:
            cands = [k for k in range(n) if table[i, k] and table[j, k]]
            best = [k for k in cands if all(table[k, c] for c in cands)]
        else:
            cands = [k for k in range(n) if table[k, i] and table[k, j]]
            best = [k for k in cands if all(table[c, k] for c in cands)]
        if not best:
            raise NoMeetOrJoin("join" if upper else "meet", (names[i], names[j]))
        return best[0]

    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for i, j in product(range(n), repeat=2):
        meet[i, j] = bound(i, j, upper=False)
        join[i, j] = bound(i, j, upper=True)
    for a, b, c in product(range(n), repeat=3):
        if meet[a, join[b, c]] != join[meet[a, b], meet[a, c]]:
            raise NotDistributive((names[a], names[b], names[c]))
    bottom = next(i for i in range(n) if table[i].all())
    top = next(i for i in range(n) if table[:, i].all())
    return Frame(name, names, table, meet, join, bottom, top)


def frame_from_covers(names: Sequence[str], pairs: Iterable[tuple[str, str]],
                      name: str = "frame") -> Frame:
    """Build a frame from generating pairs ``a <= b`` (reflexive-transitive closure)."""
    names = tuple(names)
    index = {x: i for i, x in enumerate(names)}
    n = len(names)
    table = np.eye(n, dtype=bool)
    for a, b in pairs:
        for x in (a, b):
            if x not in index:
                raise FrameError(f"unknown level {x!r} in leq")
        table[index[a], index[b]] = True
    for k in range(n):
        table |= table[:, [k]] & table[[k], :]
    return validate_frame(names, table, name=name)


@lru_cache(maxsize=None)
def chain(n: int, names: tuple[str, ...] | None = None) -> Frame:
    """The n-element chain, levels named ``0 .. n-1`` unless ``names`` is given."""
    if n < 1:
        raise FrameError("a chain needs at least one element")
    names = names or tuple(str(i) for i in range(n))
    if len(names) != n:
        raise FrameError(f"chain {n} needs {n} names")
    table = [[i <= j for j in range(n)] for i in range(n)]
    return validate_frame(names, table, name=f"chain{n}")


@lru_cache(maxsize=None)
def boolean(n: int) -> Frame:
    """The powerset of an n-point set; level names are bitstrings."""
    size = 1 << n
    names = tuple(format(i, f"0{n}b") if n else "0" for i in range(size))
    table = [[(i & j) == i for j in range(size)] for i in range(size)]
    return validate_frame(names, table, name=f"bool{n}")


@dataclass(frozen=True)
class FuzzySet:
    """A finite set of names, each carrying a level."""

    frame: Frame = field(repr=False)
    levels: Mapping[str, FrameElement]

    def __post_init__(self):
        object.__setattr__(self, "levels", dict(self.levels))
        for v in self.levels.values():
            self.frame.own(v)

    def __iter__(self):
        return iter(self.levels)

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, name: str) -> FrameElement:
        return self.levels[name]

    def __hash__(self) -> int:
        return hash((self.frame, frozenset(self.levels.items())))

    def __eq__(self, other) -> bool:
        return (isinstance(other, FuzzySet) and other.frame == self.frame
                and dict(other.levels) == dict(self.levels))

    def support(self) -> tuple[str, ...]:
        return tuple(m for m, l in self.levels.items() if l != self.frame.bottom)
