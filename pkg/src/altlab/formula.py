"""Formulas of the multi-agent modal language with common/everyone belief.

The core constructors are ``Atom``, ``Not``, ``And``, ``Box``, ``C`` and
``E``.  ``Or``, ``Implies``, ``Iff``, ``Diamond``, ``CHat`` and ``EHat`` are
sugar: they survive parsing and rendering, and :func:`normalize` rewrites
them into the core.

Surface grammar (loosest to tightest)::

    iff     := imp ('<->' imp)*          left-assoc
    imp     := or ('->' imp)?            right-assoc
    or      := and ('|' and)*            left-assoc
    and     := unary ('&' unary)*        left-assoc
    unary   := '~' unary | '[' AG ']' unary | '<' AG '>' unary
             | 'C' unary | 'E' unary | '<C>' unary | '<E>' unary
             | ATOM | '(' iff ')'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

AGENT_RE = re.compile(r"^[A-Za-z0-9_]+$")
ATOM_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
RESERVED = frozenset({"C", "E"})


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.text = text


class UnknownAgentError(ValueError):
    pass


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return render(self)

    # operator sugar for building formulas in Python
    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def children(self) -> tuple["Formula", ...]:
        return ()


@dataclass(frozen=True, eq=True, slots=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True, eq=True, slots=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True, slots=True)
class Box(Formula):
    agent: str
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True, slots=True)
class C(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True, slots=True)
class E(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


# --- sugar -----------------------------------------------------------------

@dataclass(frozen=True, eq=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True, slots=True)
class Diamond(Formula):
    agent: str
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True, slots=True)
class CHat(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True, slots=True)
class EHat(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


CORE_TYPES = (Atom, Not, And, Box, C, E)
MODAL_TYPES = (Box, Diamond, C, E, CHat, EHat)


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction of one or more formulas."""
    if not fs:
        raise ValueError("empty conjunction")
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def boxes(agents: Iterable[str], f: Formula) -> Formula:
    """``boxes("ab", p)`` is ``[a][b] p``."""
    for a in reversed(list(agents)):
        f = Box(a, f)
    return f


# --- normalization -----------------------------------------------------------

@lru_cache(maxsize=200_000)
def normalize(f: Formula) -> Formula:
    """Expand sugar into the core (Atom, Not, And, Box, C, E)."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(normalize(f.arg))
    if isinstance(f, And):
        return And(normalize(f.left), normalize(f.right))
    if isinstance(f, Box):
        return Box(f.agent, normalize(f.arg))
    if isinstance(f, C):
        return C(normalize(f.arg))
    if isinstance(f, E):
        return E(normalize(f.arg))
    if isinstance(f, Or):
        return Not(And(Not(normalize(f.left)), Not(normalize(f.right))))
    if isinstance(f, Implies):
        return Not(And(normalize(f.left), Not(normalize(f.right))))
    if isinstance(f, Iff):
        return And(normalize(Implies(f.left, f.right)),
                   normalize(Implies(f.right, f.left)))
    if isinstance(f, Diamond):
        return Not(Box(f.agent, Not(normalize(f.arg))))
    if isinstance(f, CHat):
        return Not(C(Not(normalize(f.arg))))
    if isinstance(f, EHat):
        return Not(E(Not(normalize(f.arg))))
    raise TypeError(f"not a formula: {f!r}")


def is_core(f: Formula) -> bool:
    return all(isinstance(g, CORE_TYPES) for g in walk(f))


def as_implication(f: Formula) -> tuple[Formula, Formula] | None:
    """Split a core formula of shape ``~(x & ~y)`` into ``(x, y)``."""
    if isinstance(f, Not) and isinstance(f.arg, And) and isinstance(f.arg.right, Not):
        return f.arg.left, f.arg.right.arg
    return None


# --- traversal -----------------------------------------------------------------

def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal over every subformula occurrence."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children()))


def subformulas(f: Formula) -> set[Formula]:
    return set(walk(f))


def atoms(f: Formula) -> set[str]:
    return {g.name for g in walk(f) if isinstance(g, Atom)}


def agents(f: Formula) -> set[str]:
    return {g.agent for g in walk(f) if isinstance(g, (Box, Diamond))}


def has_common(f: Formula) -> bool:
    """True if C, E or one of their duals occurs in ``f``."""
    return any(isinstance(g, (C, E, CHat, EHat)) for g in walk(f))


def size(f: Formula) -> int:
    return 1 + sum(size(g) for g in f.children())


def height(f: Formula) -> int:
    ch = f.children()
    return 0 if not ch else 1 + max(height(g) for g in ch)


def modal_depth(f: Formula) -> int:
    """Maximal nesting of modalities; C, E and their duals count as one level."""
    ch = f.children()
    inner = max((modal_depth(g) for g in ch), default=0)
    return inner + 1 if isinstance(f, MODAL_TYPES) else inner


def substitute(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Replace atoms by formulas (simultaneously)."""
    if isinstance(f, Atom):
        return mapping.get(f.name, f)
    if isinstance(f, (Box, Diamond)):
        return type(f)(f.agent, substitute(f.arg, mapping))
    ch = tuple(substitute(g, mapping) for g in f.children())
    return type(f)(*ch)


def check_agents(f: Formula, universe: Iterable[str]) -> None:
    universe = set(universe)
    unknown = sorted(agents(f) - universe)
    if unknown:
        raise UnknownAgentError(f"unknown agent(s) {unknown}; universe is {sorted(universe)}")


# --- occurrence trees ------------------------------------------------------------

@dataclass(frozen=True)
class OccurrenceTree:
    """Tree of occurrence types of a core formula.

    Node ``i`` is the occurrence type ``paths[i]``: a tuple of formulas whose
    last element is the root formula and whose first element is the occurring
    subformula.  ``parent[i]`` is the index of the node obtained by dropping
    the first element (``-1`` for the root).
    """
    root: Formula
    paths: tuple[tuple[Formula, ...], ...]
    parent: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.paths)

    def formula(self, i: int) -> Formula:
        return self.paths[i][0]

    def children(self, i: int) -> list[int]:
        return [j for j, p in enumerate(self.parent) if p == i]

    def le(self, i: int, j: int) -> bool:
        """``O_i <= O_j``: ``O_j`` is a suffix of ``O_i`` (i lies below j)."""
        pi, pj = self.paths[i], self.paths[j]
        return len(pi) >= len(pj) and pi[len(pi) - len(pj):] == pj

    def ancestors(self, i: int) -> Iterator[int]:
        """Strict ancestors of node ``i``, nearest first."""
        j = self.parent[i]
        while j != -1:
            yield j
            j = self.parent[j]


def occurrence_tree(f: Formula) -> OccurrenceTree:
    if not is_core(f):
        raise ValueError("occurrence_tree expects a core-normalized formula; call normalize() first")
    paths: list[tuple[Formula, ...]] = []
    parent: list[int] = []
    stack: list[tuple[tuple[Formula, ...], int]] = [((f,), -1)]
    while stack:
        path, par = stack.pop()
        idx = len(paths)
        paths.append(path)
        parent.append(par)
        for g in reversed(path[0].children()):
            stack.append(((g,) + path, idx))
    return OccurrenceTree(f, tuple(paths), tuple(parent))


# --- parsing -----------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<chat><C>)
  | (?P<ehat><E>)
  | (?P<box>\[\s*(?P<boxag>[A-Za-z0-9_]+)\s*\])
  | (?P<dia><\s*(?P<diaag>[A-Za-z0-9_]+)\s*>)
  | (?P<not>~)
  | (?P<and>&)
  | (?P<or>\|)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if m.group("box"):
            out.append(("box", m.group("boxag"), pos))
        elif m.group("dia"):
            out.append(("dia", m.group("diaag"), pos))
        elif kind == "ident" and m.group() in RESERVED:
            out.append((m.group(), m.group(), pos))
        elif kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, kind: str | None = None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {kind}, found {what!r}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() != "eof":
            tok = self.toks[self.i]
            raise FormulaSyntaxError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek() == "iff":
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek() == "imp":
            self.take()
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "or":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "and":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, pos = self.toks[self.i]
        if kind == "not":
            self.take()
            return Not(self.unary())
        if kind == "box":
            self.take()
            return Box(val, self.unary())
        if kind == "dia":
            self.take()
            return Diamond(val, self.unary())
        if kind == "C":
            self.take()
            return C(self.unary())
        if kind == "E":
            self.take()
            return E(self.unary())
        if kind == "chat":
            self.take()
            return CHat(self.unary())
        if kind == "ehat":
            self.take()
            return EHat(self.unary())
        if kind == "ident":
            self.take()
            return Atom(val)
        if kind == "lp":
            self.take()
            f = self.iff()
            self.take("rp")
            return f
        raise FormulaSyntaxError(f"expected a formula, found {val or 'end of input'!r}", pos, self.text)


def parse(text: str, universe: Iterable[str] | None = None) -> Formula:
    """Parse formula source text; optionally validate agents against ``universe``."""
    f = _Parser(text).parse()
    if universe is not None:
        check_agents(f, universe)
    return f


# --- rendering ------------------------------------------------------------------------

# binding strength: larger binds tighter
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_UNARY = 5


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), _UNARY)


def render(f: Formula) -> str:
    """Render with the fewest parentheses that still re-parse to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "~" + _operand(f.arg)
    if isinstance(f, Box):
        return f"[{f.agent}] " + _operand(f.arg)
    if isinstance(f, Diamond):
        return f"<{f.agent}> " + _operand(f.arg)
    if isinstance(f, C):
        return "C " + _operand(f.arg)
    if isinstance(f, E):
        return "E " + _operand(f.arg)
    if isinstance(f, CHat):
        return "<C> " + _operand(f.arg)
    if isinstance(f, EHat):
        return "<E> " + _operand(f.arg)
    op = {And: "&", Or: "|", Implies: "->", Iff: "<->"}[type(f)]
    p = _prec(f)
    left, right = render(f.left), render(f.right)
    if isinstance(f, Implies):
        # right-associative
        if _prec(f.left) <= p:
            left = f"({left})"
        if _prec(f.right) < p:
            right = f"({right})"
    else:
        if _prec(f.left) < p:
            left = f"({left})"
        if _prec(f.right) <= p:
            right = f"({right})"
    return f"{left} {op} {right}"


def _operand(g: Formula) -> str:
    s = render(g)
    return s if _prec(g) == _UNARY else f"({s})"
