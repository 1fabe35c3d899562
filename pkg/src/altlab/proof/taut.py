"""Propositional tautology checking over modal formulas.

Every maximal subformula that is not a Boolean combination (an atom or a
formula headed by a modality) becomes one propositional variable; identical
subformulas share a variable. Truth tables are evaluated all at once as
bitsets: variable ``i`` is the integer whose bit ``r`` is bit ``i`` of row ``r``.
"""
from __future__ import annotations

from typing import Iterable

from ..formula import And, Formula, Implies, Not, conj, normalize

MAX_VARIABLES = 20


class TautologyGuardError(ValueError):
    pass


def boolean_atoms(f: Formula) -> list[Formula]:
    """Distinct maximal non-Boolean subformulas of the core form of ``f``, in first-seen order."""
    seen: dict[Formula, None] = {}

    def visit(g):
        if isinstance(g, Not):
            visit(g.arg)
        elif isinstance(g, And):
            visit(g.left)
            visit(g.right)
        else:
            seen.setdefault(g)

    visit(normalize(f))
    return list(seen)


def _column(i: int, n: int) -> int:
    """Bitset of the rows (0 .. 2**n - 1) in which variable ``i`` is true."""
    width = 1 << (i + 1)
    col = ((1 << (1 << i)) - 1) << (1 << i)  # one period: 2**i zeros, then 2**i ones
    while width < (1 << n):
        col |= col << width
        width <<= 1
    return col


def truth_table(f: Formula, max_variables: int = MAX_VARIABLES) -> tuple[int, int]:
    """(bitset of satisfying rows, number of rows)."""
    g = normalize(f)
    variables = boolean_atoms(g)
    n = len(variables)
    if n > max_variables:
        raise TautologyGuardError(
            f"{n} propositional variables exceed the guard of {max_variables}")
    rows = 1 << n
    full = (1 << rows) - 1
    index = {v: i for i, v in enumerate(variables)}
    cols = {}

    def ev(h) -> int:
        if isinstance(h, Not):
            return full ^ ev(h.arg)
        if isinstance(h, And):
            return ev(h.left) & ev(h.right)
        i = index[h]
        if i not in cols:
            cols[i] = _column(i, n)
        return cols[i]

    return ev(g), rows


def tautology(f: Formula, max_variables: int = MAX_VARIABLES) -> bool:
    table, rows = truth_table(f, max_variables)
    return table == (1 << rows) - 1


def implied(premises: Iterable[Formula], conclusion: Formula,
            max_variables: int = MAX_VARIABLES) -> bool:
    """Whether ``conclusion`` follows propositionally from ``premises``."""
    premises = list(premises)
    if not premises:
        return tautology(conclusion, max_variables)
    return tautology(Implies(conj(*premises), conclusion), max_variables)
