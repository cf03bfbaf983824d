"""Signatures, languages, terms, substitutions and language morphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count, product
from typing import Iterable, Iterator, Mapping, Sequence, Union

from ._lex import Cursor, ParseError, quote, tokenize


class UnknownName(ParseError):
    def __init__(self, name: str, line: int = 0, col: int = 0):
        super().__init__(f"unknown name {name!r}", line, col)
        self.name = name


class ArityMismatch(ParseError):
    def __init__(self, op: str, expected: int, got: int, line: int = 0, col: int = 0):
        super().__init__(f"{op} takes {expected} argument(s), got {got}", line, col)
        self.op = op
        self.expected = expected
        self.got = got


class NameClash(ValueError):
    pass


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str
    _key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (1, 0, self.name))

    size = property(lambda self: 1)
    depth = property(lambda self: 0)

    def __str__(self) -> str:
        return quote(self.name)


@dataclass(frozen=True)
class Const:
    name: str
    _key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (1, 1, self.name))

    size = property(lambda self: 1)
    depth = property(lambda self: 0)

    def __str__(self) -> str:
        return quote(self.name)


@dataclass(frozen=True)
class App:
    op: str
    args: tuple
    _key: tuple = field(init=False, repr=False, compare=False)
    _depth: int = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        args = tuple(self.args)
        object.__setattr__(self, "args", args)
        size = 1 + sum(a.size for a in args)
        object.__setattr__(self, "_key", (size, 2, self.op, tuple(a._key for a in args)))
        object.__setattr__(self, "_depth", 1 + max((a.depth for a in args), default=0))
        object.__setattr__(self, "_hash", hash((self.op, args)))

    def __hash__(self) -> int:
        return self._hash

    size = property(lambda self: self._key[0])
    depth = property(lambda self: self._depth)

    def __str__(self) -> str:
        return f"{quote(self.op)}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, Const, App]


def _lt(a: Term, b: Term) -> bool:
    return a._key < b._key


# size first, then lexicographic on (kind, head, arguments)
for _cls in (Var, Const, App):
    _cls.__lt__ = _lt
    _cls.__gt__ = lambda a, b: _lt(b, a)
    _cls.__le__ = lambda a, b: a == b or _lt(a, b)
    _cls.__ge__ = lambda a, b: a == b or _lt(b, a)


def term_key(t: Term) -> tuple:
    return t._key


def variables_of(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return frozenset().union(*(variables_of(a) for a in t.args))
    return frozenset()


def constants_of(t: Term) -> frozenset[str]:
    if isinstance(t, Const):
        return frozenset((t.name,))
    if isinstance(t, App):
        return frozenset().union(*(constants_of(a) for a in t.args))
    return frozenset()


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def is_ground(t: Term) -> bool:
    return not variables_of(t)


def subterm_at(t: Term, pos: Sequence[int]) -> Term:
    for i in pos:
        if not isinstance(t, App) or not 0 <= i < len(t.args):
            raise IndexError(f"no subterm at position {tuple(pos)}")
        t = t.args[i]
    return t


def replace_at(t: Term, pos: Sequence[int], new: Term) -> Term:
    if not pos:
        return new
    if not isinstance(t, App) or not 0 <= pos[0] < len(t.args):
        raise IndexError(f"no subterm at position {tuple(pos)}")
    args = list(t.args)
    args[pos[0]] = replace_at(args[pos[0]], pos[1:], new)
    return App(t.op, tuple(args))


def match(pattern: Term, t: Term, sigma: dict[str, Term] | None = None) -> dict[str, Term] | None:
    """Extend ``sigma`` so that ``pattern`` instantiates to ``t``, or return None."""
    sigma = {} if sigma is None else dict(sigma)
    stack = [(pattern, t)]
    while stack:
        p, u = stack.pop()
        if isinstance(p, Var):
            if sigma.setdefault(p.name, u) != u:
                return None
        elif isinstance(p, Const):
            if p != u:
                return None
        elif not (isinstance(u, App) and u.op == p.op and len(u.args) == len(p.args)):
            return None
        else:
            stack.extend(zip(p.args, u.args))
    return sigma


# ---------------------------------------------------------------- signatures

@dataclass(frozen=True)
class Signature:
    """Operation symbols of positive arity plus constant symbols."""

    ops: tuple[tuple[str, int], ...] = ()
    consts: frozenset[str] = frozenset()

    def __post_init__(self):
        ops = self.ops.items() if isinstance(self.ops, Mapping) else self.ops
        ops = tuple(sorted((str(f), int(n)) for f, n in ops))
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "consts", frozenset(self.consts))
        names = [f for f, _ in ops]
        if len(set(names)) != len(names):
            raise NameClash(f"duplicate operation symbol in {names}")
        for f, n in ops:
            if n < 1:
                raise ValueError(f"operation {f} must have positive arity (constants are separate)")
        if set(names) & self.consts:
            raise NameClash(f"names used as both operation and constant: {sorted(set(names) & self.consts)}")

    @property
    def arities(self) -> dict[str, int]:
        return dict(self.ops)

    def arity(self, f: str) -> int:
        for g, n in self.ops:
            if g == f:
                return n
        raise UnknownName(f)

    def has_op(self, f: str) -> bool:
        return any(g == f for g, _ in self.ops)

    def symbols(self) -> frozenset[str]:
        return frozenset(f for f, _ in self.ops) | self.consts

    def with_constants(self, names: Iterable[str]) -> Signature:
        names = frozenset(names)
        clash = names & self.symbols()
        if clash:
            raise NameClash(f"constant names already used: {sorted(clash)}")
        return Signature(self.ops, self.consts | names)


@dataclass(frozen=True)
class Language:
    signature: Signature
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        vs = tuple(dict.fromkeys(self.variables))
        object.__setattr__(self, "variables", vs)
        clash = set(vs) & self.signature.symbols()
        if clash:
            raise NameClash(f"variable names clash with symbols: {sorted(clash)}")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Language) and self.signature == other.signature
                and set(self.variables) == set(other.variables))

    def __hash__(self) -> int:
        return hash((self.signature, frozenset(self.variables)))

    def names(self) -> frozenset[str]:
        return self.signature.symbols() | frozenset(self.variables)

    def fresh_variable(self, base: str = "v") -> tuple[str, Language]:
        """A variable name not yet used, and the language extended with it."""
        taken = self.names()
        for i in count():
            cand = base if i == 0 else f"{base}{i}"
            if cand not in taken:
                return cand, Language(self.signature, self.variables + (cand,))
        raise AssertionError

    def with_variables(self, names: Iterable[str]) -> Language:
        return Language(self.signature, self.variables + tuple(names))

    def with_constants(self, names: Iterable[str]) -> Language:
        names = tuple(names)
        clash = set(names) & set(self.variables)
        if clash:
            raise NameClash(f"constant names already used as variables: {sorted(clash)}")
        return Language(self.signature.with_constants(names), self.variables)


def validate_term(t: Term, lang: Language) -> Term:
    if isinstance(t, Var):
        if t.name not in lang.variables:
            raise UnknownName(t.name)
    elif isinstance(t, Const):
        if t.name not in lang.signature.consts:
            raise UnknownName(t.name)
    elif isinstance(t, App):
        if not lang.signature.has_op(t.op):
            raise UnknownName(t.op)
        n = lang.signature.arity(t.op)
        if n != len(t.args):
            raise ArityMismatch(t.op, n, len(t.args))
        for a in t.args:
            validate_term(a, lang)
    else:
        raise TypeError(f"not a term: {t!r}")
    return t


# ---------------------------------------------------------------- parsing

def parse_term_at(cur: Cursor, lang: Language) -> Term:
    tok = cur.name("term")
    name = tok.text
    if cur.at("("):
        if not lang.signature.has_op(name):
            raise UnknownName(name, tok.line, tok.col)
        cur.advance()
        args = [parse_term_at(cur, lang)]
        while cur.accept(","):
            args.append(parse_term_at(cur, lang))
        cur.expect(")")
        n = lang.signature.arity(name)
        if n != len(args):
            raise ArityMismatch(name, n, len(args), tok.line, tok.col)
        return App(name, tuple(args))
    if name in lang.signature.consts:
        return Const(name)
    if name in lang.variables:
        return Var(name)
    if lang.signature.has_op(name):
        raise ArityMismatch(name, lang.signature.arity(name), 0, tok.line, tok.col)
    raise UnknownName(name, tok.line, tok.col)


def parse_term(text: str, lang: Language) -> Term:
    cur = Cursor(tokenize(text))
    t = parse_term_at(cur, lang)
    if cur.tok.kind != "eof":
        raise cur.error(f"trailing input {cur.tok.text!r}")
    return t


# ---------------------------------------------------------------- substitutions

class Substitution(Mapping[str, Term]):
    """A finite map from variable names to terms; identity elsewhere."""

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Mapping[str, Term] | Iterable[tuple[str, Term]] = ()):
        items = dict(mapping)
        self._map = {x: t for x, t in items.items() if t != Var(x)}
        self._hash = None

    def __getitem__(self, x: str) -> Term:
        return self._map[x]

    def __iter__(self):
        return iter(sorted(self._map))

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other) -> bool:
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{x} := {self._map[x]}" for x in sorted(self._map))
        return "{" + inner + "}"

    def apply(self, t: Term) -> Term:
        return substitute(t, self._map)

    __call__ = apply

    def then(self, other: Substitution) -> Substitution:
        """The substitution that applies ``self`` first and ``other`` second."""
        out = {x: other.apply(t) for x, t in self._map.items()}
        for x, t in other._map.items():
            out.setdefault(x, t)
        return Substitution(out)


def substitute(t: Term, sigma: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, App):
        return App(t.op, tuple(substitute(a, sigma) for a in t.args))
    return t


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class LanguageMorphism:
    """Symbol maps between two languages; arities must agree."""

    source: Language
    target: Language
    ops: Mapping[str, str]
    consts: Mapping[str, str]
    vars: Mapping[str, str]

    def __post_init__(self):
        for attr in ("ops", "consts", "vars"):
            object.__setattr__(self, attr, dict(getattr(self, attr)))
        s, t = self.source.signature, self.target.signature
        for f, n in s.ops:
            if f not in self.ops:
                raise ValueError(f"morphism does not map operation {f}")
            g = self.ops[f]
            if not t.has_op(g):
                raise UnknownName(g)
            if t.arity(g) != n:
                raise ArityMismatch(g, n, t.arity(g))
        for c in s.consts:
            if c not in self.consts:
                raise ValueError(f"morphism does not map constant {c}")
            if self.consts[c] not in t.consts:
                raise UnknownName(self.consts[c])
        for x in self.source.variables:
            if x not in self.vars:
                raise ValueError(f"morphism does not map variable {x}")
            if self.vars[x] not in self.target.variables:
                raise UnknownName(self.vars[x])

    def __hash__(self) -> int:
        return hash((self.source, self.target, frozenset(self.ops.items()),
                     frozenset(self.consts.items()), frozenset(self.vars.items())))

    @classmethod
    def identity(cls, lang: Language) -> LanguageMorphism:
        sig = lang.signature
        return cls(lang, lang, {f: f for f, _ in sig.ops}, {c: c for c in sig.consts},
                   {x: x for x in lang.variables})

    @classmethod
    def inclusion(cls, source: Language, target: Language) -> LanguageMorphism:
        sig = source.signature
        return cls(source, target, {f: f for f, _ in sig.ops}, {c: c for c in sig.consts},
                   {x: x for x in source.variables})

    def map_term(self, t: Term) -> Term:
        if isinstance(t, Var):
            return Var(self.vars[t.name])
        if isinstance(t, Const):
            return Const(self.consts[t.name])
        return App(self.ops[t.op], tuple(self.map_term(a) for a in t.args))

    def preimage_term(self, t: Term) -> list[Term]:
        """All source terms mapped onto ``t``."""
        if isinstance(t, Var):
            return [Var(x) for x, y in sorted(self.vars.items()) if y == t.name]
        if isinstance(t, Const):
            return [Const(c) for c, d in sorted(self.consts.items()) if d == t.name]
        heads = [f for f, g in sorted(self.ops.items()) if g == t.op]
        if not heads:
            return []
        choices = [self.preimage_term(a) for a in t.args]
        out: list[Term] = []
        for f in heads:
            for args in product(*choices):
                out.append(App(f, args))
        return out

    def then(self, other: LanguageMorphism) -> LanguageMorphism:
        return LanguageMorphism(
            self.source, other.target,
            {f: other.ops[g] for f, g in self.ops.items()},
            {c: other.consts[d] for c, d in self.consts.items()},
            {x: other.vars[y] for x, y in self.vars.items()},
        )
