"""Exact-rational linear programming by two-phase tableau simplex.

Bland's rule (lowest index enters, lowest basic index leaves on ties) rules
out cycling, so every call terminates. Meant for the tiny dominance programs
of the games module; there is no attempt at numerical cleverness.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Number = int | Fraction


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] = ()
    value: Fraction | None = None


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.cost: list[Fraction] = []
        self.z = Fraction(0)

    def set_objective(self, cost: Sequence[Fraction]) -> None:
        """Reduced costs for minimizing ``cost`` under the current basis."""
        red = list(cost)
        z = Fraction(0)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j, v in enumerate(row):
                    if v:
                        red[j] -= cb * v
                z -= cb * self.rhs[i]
        self.cost, self.z = red, z

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        if p != 1:
            self.rows[r] = row = [v / p for v in row]
            self.rhs[r] /= p
        for i, other in enumerate(self.rows):
            if i != r and other[c]:
                k = other[c]
                self.rows[i] = [a - k * b for a, b in zip(other, row)]
                self.rhs[i] -= k * self.rhs[r]
        k = self.cost[c]
        if k:
            self.cost = [a - k * b for a, b in zip(self.cost, row)]
            self.z -= k * self.rhs[r]
        self.basis[r] = c

    def run(self, allowed: int) -> bool:
        """Minimize; columns >= ``allowed`` never enter. False if unbounded."""
        while True:
            enter = next((j for j in range(allowed) if self.cost[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = self.rhs[i] / row[enter]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)


def linprog(c: Sequence[Number], A_ub: Sequence[Sequence[Number]] = (), b_ub: Sequence[Number] = (),
            A_eq: Sequence[Sequence[Number]] = (), b_eq: Sequence[Number] = (),
            maximize: bool = False) -> LPResult:
    """Optimize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x == b_eq``, ``x >= 0``."""
    n = len(c)
    m_ub, m_eq = len(A_ub), len(A_eq)
    if len(b_ub) != m_ub or len(b_eq) != m_eq:
        raise ValueError("constraint matrix and right-hand side lengths differ")
    for row in list(A_ub) + list(A_eq):
        if len(row) != n:
            raise ValueError("constraint row length does not match the objective")
    m = m_ub + m_eq
    width = n + m_ub + m  # originals, slacks, artificials
    rows, rhs = [], []
    for i in range(m):
        if i < m_ub:
            coeffs, b = list(A_ub[i]), b_ub[i]
            slack = [Fraction(0)] * m_ub
            slack[i] = Fraction(1)
        else:
            coeffs, b = list(A_eq[i - m_ub]), b_eq[i - m_ub]
            slack = [Fraction(0)] * m_ub
        row = [Fraction(v) for v in coeffs] + slack
        b = Fraction(b)
        if b < 0:
            row, b = [-v for v in row], -b
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows.append(row + art)
        rhs.append(b)
    t = _Tableau(rows, rhs, [n + m_ub + i for i in range(m)])

    # phase 1: drive the artificials to zero
    t.set_objective([Fraction(0)] * (n + m_ub) + [Fraction(1)] * m)
    t.run(width)
    if -t.z != 0:
        return LPResult("infeasible")
    for i in reversed(range(len(t.rows))):
        if t.basis[i] >= n + m_ub:
            col = next((j for j in range(n + m_ub) if t.rows[i][j] != 0), None)
            if col is None:  # redundant equality
                del t.rows[i], t.rhs[i], t.basis[i]
            else:
                t.pivot(i, col)

    # phase 2
    sign = -1 if maximize else 1
    t.set_objective([sign * Fraction(v) for v in c] + [Fraction(0)] * (m_ub + m))
    if not t.run(n + m_ub):
        return LPResult("unbounded")
    x = [Fraction(0)] * width
    for i, b in enumerate(t.basis):
        x[b] = t.rhs[i]
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x[:n])), Fraction(0))
    return LPResult("optimal", tuple(x[:n]), value)
