"""Membership in the agent-alternating, agent-nonrepeating and C-fragments.

Two independent routes decide agent alternation:

* :func:`alternating_occ` walks the occurrence tree and looks, for every
  ``[a]``-occurrence, at the nearest box above it;
* :func:`alternating_ind` evaluates the simultaneous inductive definition
  bottom-up, tracking the set ``{a : f in L_-a}``.

Nonrepeating membership is likewise decided on the tree
(:func:`nonrepeating_occ`) and inductively (:func:`required_agents`, the
least ``X`` with ``f in L_X``).

C and E (and their duals) are transparent for the box-skeleton checks; the
report then carries ``extended=True`` and the flags should not be read as
collapse claims.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .formula import (And, Atom, Box, C, E, Formula, Not, agents as formula_agents,
                      has_common, normalize, occurrence_tree)

C_P = "C^p"
LALT_CP = "L_alt C^p"
C_ALT = "C_alt"
NONE = "none"
C_FRAGMENTS = (C_P, LALT_CP, C_ALT, NONE)


def universe_for(f: Formula, universe: Iterable[str] | None = None) -> tuple[str, ...]:
    """Agent universe for ``f``: the given one, else the agents of ``f``
    padded with fresh names so that there are at least two."""
    if universe is not None:
        u = tuple(sorted(set(universe)))
        missing = formula_agents(f) - set(u)
        if missing:
            raise ValueError(f"agents {sorted(missing)} not in universe {list(u)}")
    else:
        u = tuple(sorted(formula_agents(f)))
    pad = iter(["a", "b", "c", "d"] + [f"x{i}" for i in range(10)])
    while len(u) < 2:
        name = next(pad)
        if name not in u:
            u = tuple(sorted(u + (name,)))
    return u


# --- occurrence-based ------------------------------------------------------------

def _skeleton_occurrences(f: Formula):
    tree = occurrence_tree(normalize(f))
    box_agent = {i: tree.formula(i).agent for i in range(len(tree))
                 if isinstance(tree.formula(i), Box)}
    return tree, box_agent


def alternating_occ(f: Formula) -> bool:
    """No two ``[a]``-occurrences, one below the other, without a ``[b]`` between."""
    tree, box_agent = _skeleton_occurrences(f)
    for i, a in box_agent.items():
        for j in tree.ancestors(i):
            if j in box_agent:
                if box_agent[j] == a:
                    return False
                break
    return True


def nonrepeating_occ(f: Formula) -> bool:
    """No ``[a]``-occurrence lies anywhere below another ``[a]``-occurrence."""
    tree, box_agent = _skeleton_occurrences(f)
    for i, a in box_agent.items():
        if any(box_agent.get(j) == a for j in tree.ancestors(i)):
            return False
    return True


# --- inductive ----------------------------------------------------------------------

@lru_cache(maxsize=100_000)
def _minus(f: Formula, universe: frozenset) -> tuple[frozenset, bool]:
    """(set of a with f in L_-a, whether f is in L_alt) for a core formula."""
    if isinstance(f, Atom):
        return universe, True
    if isinstance(f, (Not, C, E)):
        return _minus(f.arg, universe)
    if isinstance(f, And):
        ml, al = _minus(f.left, universe)
        mr, ar = _minus(f.right, universe)
        return ml & mr, al and ar
    if isinstance(f, Box):
        inner, _ = _minus(f.arg, universe)
        if f.agent in inner:
            return universe - {f.agent}, True
        return frozenset(), False
    raise TypeError(f"not a core formula: {f!r}")


def minus_agents(f: Formula, universe: Iterable[str] | None = None) -> frozenset:
    """The agents ``a`` with ``f`` in ``L_-a``."""
    return _minus(normalize(f), frozenset(universe_for(f, universe)))[0]


def alternating_ind(f: Formula, universe: Iterable[str] | None = None) -> bool:
    return _minus(normalize(f), frozenset(universe_for(f, universe)))[1]


@lru_cache(maxsize=100_000)
def _required(f: Formula) -> frozenset | None:
    if isinstance(f, Atom):
        return frozenset()
    if isinstance(f, (Not, C, E)):
        return _required(f.arg)
    if isinstance(f, And):
        left, right = _required(f.left), _required(f.right)
        if left is None or right is None:
            return None
        return left | right
    if isinstance(f, Box):
        inner = _required(f.arg)
        if inner is None or f.agent in inner:
            return None
        return inner | {f.agent}
    raise TypeError(f"not a core formula: {f!r}")


def required_agents(f: Formula) -> frozenset | None:
    """Least agent set ``X`` with ``f`` in ``L_X``, or None if there is none.

    Membership is upward closed, so ``f in L_X`` iff this set is a subset of X.
    """
    return _required(normalize(f))


def in_lx(f: Formula, xs: Iterable[str]) -> bool:
    req = required_agents(f)
    return req is not None and req <= set(xs)


# --- common-belief fragments ----------------------------------------------------------

@lru_cache(maxsize=100_000)
def _c_minus(f: Formula, universe: frozenset) -> tuple[frozenset, bool] | None:
    """Like ``_minus`` for the grammar extended with C; None if E occurs."""
    if isinstance(f, Atom):
        return universe, True
    if isinstance(f, E):
        return None
    if isinstance(f, (Not, C)):
        return _c_minus(f.arg, universe)
    if isinstance(f, And):
        left, right = _c_minus(f.left, universe), _c_minus(f.right, universe)
        if left is None or right is None:
            return None
        return left[0] & right[0], left[1] and right[1]
    if isinstance(f, Box):
        inner = _c_minus(f.arg, universe)
        if inner is None:
            return None
        if f.agent in inner[0]:
            return universe - {f.agent}, True
        return frozenset(), False
    raise TypeError(f"not a core formula: {f!r}")


def _only_c(f: Formula) -> bool:
    if isinstance(f, (Box, E)):
        return False
    return all(_only_c(g) for g in f.children())


def _in_lalt_cp(f: Formula, universe: frozenset) -> bool:
    if _only_c(f):
        return True
    if not has_common(f) and _minus(f, universe)[1]:
        return True
    if isinstance(f, Not):
        return _in_lalt_cp(f.arg, universe)
    if isinstance(f, And):
        return _in_lalt_cp(f.left, universe) and _in_lalt_cp(f.right, universe)
    return False


def classify_c(f: Formula, universe: Iterable[str] | None = None) -> str:
    """Smallest of C^p, L_alt C^p, C_alt containing ``f`` (or "none")."""
    u = frozenset(universe_for(f, universe))
    g = normalize(f)
    if _only_c(g):
        return C_P
    if _in_lalt_cp(g, u):
        return LALT_CP
    res = _c_minus(g, u)
    if res is not None and res[1]:
        return C_ALT
    return NONE


# --- report --------------------------------------------------------------------------

@dataclass(frozen=True)
class FragmentReport:
    formula: Formula
    universe: tuple[str, ...]
    alternating_occ: bool
    alternating_ind: bool
    nonrepeating: bool
    minus: frozenset
    required: frozenset | None
    c_fragment: str
    extended: bool

    @property
    def alternating(self) -> bool:
        return self.alternating_occ

    def in_minus(self, agent: str) -> bool:
        """Membership in ``L_-agent``."""
        return agent in self.minus

    def in_Lx(self, xs: Iterable[str]) -> bool:
        return self.required is not None and self.required <= set(xs)

    def as_dict(self) -> dict:
        return {
            "formula": str(self.formula),
            "universe": list(self.universe),
            "alternating": self.alternating_occ,
            "alternating_occ": self.alternating_occ,
            "alternating_ind": self.alternating_ind,
            "nonrepeating": self.nonrepeating,
            "in_minus": {a: a in self.minus for a in self.universe},
            "required_agents": None if self.required is None else sorted(self.required),
            "c_fragment": self.c_fragment,
            "extended": self.extended,
        }


def classify(f: Formula, universe: Iterable[str] | None = None) -> FragmentReport:
    u = universe_for(f, universe)
    return FragmentReport(
        formula=f,
        universe=u,
        alternating_occ=alternating_occ(f),
        alternating_ind=alternating_ind(f, u),
        nonrepeating=nonrepeating_occ(f),
        minus=minus_agents(f, u),
        required=required_agents(f),
        c_fragment=classify_c(f, u),
        extended=has_common(f),
    )
