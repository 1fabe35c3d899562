"""Brute-force dominance by enumerating mixtures on a rational grid.

Independent of the LP: a strategy counts as dominated when some mixture whose
weights are multiples of 1/d (d up to ``max_den``) beats it strictly against
every allowed opponent profile.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

from .game import StrategicGame


def grid_mixtures(k: int, max_den: int):
    seen = set()
    for d in range(1, max_den + 1):
        for parts in product(range(d + 1), repeat=k):
            if sum(parts) == d:
                w = tuple(Fraction(p, d) for p in parts)
                if w not in seen:
                    seen.add(w)
                    yield w


def grid_dominated(game: StrategicGame, player: str, strategy: str, support, restriction,
                   max_den: int = 6) -> bool:
    support = tuple(support)
    rows = list(game.opponent_profiles(player, restriction))
    table = [[game.payoff_against(player, t, q) for q in rows] for t in support]
    base = [game.payoff_against(player, strategy, q) for q in rows]
    for w in grid_mixtures(len(support), max_den):
        if all(sum(wi * table[i][j] for i, wi in enumerate(w)) > base[j] for j in range(len(rows))):
            return True
    return False


def grid_iesds(game: StrategicGame, max_den: int = 6) -> dict[str, tuple[str, ...]]:
    alive = {a: tuple(game.strategies[a]) for a in game.players}
    while True:
        removed = {}
        for a in game.players:
            others = {b: alive[b] for b in game.players if b != a}
            removed[a] = {s for s in alive[a] if grid_dominated(game, a, s, alive[a], others, max_den)}
        if not any(removed.values()):
            return alive
        alive = {a: tuple(s for s in alive[a] if s not in removed[a]) for a in game.players}


def _solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system by Gauss-Jordan elimination, else None."""
    n = len(matrix)
    a = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                k = a[r][col]
                a[r] = [x - k * y for x, y in zip(a[r], a[col])]
    return [row[n] for row in a]


def vertex_margin(game: StrategicGame, player: str, strategy: str, support, restriction) -> Fraction:
    """Best dominance margin, by enumerating every vertex of the feasible region.

    Unknowns are the k mixture weights and the margin e. The region is
    {sum x = 1, x >= 0, payoff rows - e >= base}; each vertex makes k of the
    inequalities tight alongside the equality.
    """
    support = tuple(support)
    k = len(support)
    rows = list(game.opponent_profiles(player, restriction))
    # inequality rows as (coefficients over x..., e) >= bound
    ineq = [([game.payoff_against(player, t, q) for t in support] + [Fraction(-1)],
             game.payoff_against(player, strategy, q)) for q in rows]
    ineq += [([Fraction(int(i == j)) for j in range(k)] + [Fraction(0)], Fraction(0)) for i in range(k)]
    eq = ([Fraction(1)] * k + [Fraction(0)], Fraction(1))
    best = None
    for tight in combinations(range(len(ineq)), k):
        sol = _solve([eq[0]] + [ineq[i][0] for i in tight], [eq[1]] + [ineq[i][1] for i in tight])
        if sol is None:
            continue
        if all(sum(c * v for c, v in zip(coef, sol)) >= b for coef, b in ineq):
            if best is None or sol[-1] > best:
                best = sol[-1]
    assert best is not None, "a pure strategy in the support is always feasible"
    return best


def vertex_iesds(game: StrategicGame) -> dict[str, tuple[str, ...]]:
    alive = {a: tuple(game.strategies[a]) for a in game.players}
    while True:
        removed = {}
        for a in game.players:
            others = {b: alive[b] for b in game.players if b != a}
            removed[a] = {s for s in alive[a] if vertex_margin(game, a, s, alive[a], others) > 0}
        if not any(removed.values()):
            return alive
        alive = {a: tuple(s for s in alive[a] if s not in removed[a]) for a in game.players}
