"""Strategic-form games, mixed-strategy dominance and IESDS."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .lp import linprog

MAX_STRATEGIES = 16


class GameError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Exact rational from an int, a Fraction or a ``"num/den"`` string."""
    if isinstance(x, bool) or isinstance(x, float):
        raise GameError(f"refusing inexact or boolean number {x!r}; use 'num/den'")
    try:
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise GameError(f"not a rational number: {x!r}") from None


@dataclass(frozen=True)
class StrategicGame:
    players: tuple[str, ...]
    strategies: Mapping[str, tuple[str, ...]]
    utilities: Mapping[tuple[str, ...], Mapping[str, Fraction]] = field(repr=False)

    def __post_init__(self):
        if len(set(self.players)) != len(self.players) or not self.players:
            raise GameError("players must be a nonempty list of distinct names")
        for a in self.players:
            ss = self.strategies.get(a)
            if not ss:
                raise GameError(f"player {a!r} has no strategies")
            if len(set(ss)) != len(ss):
                raise GameError(f"player {a!r} has duplicate strategies")
        for profile in self.profiles():
            pay = self.utilities.get(profile)
            if pay is None:
                raise GameError(f"no payoffs for profile {list(profile)}")
            missing = [a for a in self.players if a not in pay]
            if missing:
                raise GameError(f"profile {list(profile)} lacks a payoff for {missing[0]!r}")

    @classmethod
    def from_table(cls, players: Sequence[str], strategies: Mapping[str, Sequence[str]],
                   payoffs: Mapping[tuple, Sequence]) -> "StrategicGame":
        """``payoffs`` maps profiles to payoff tuples in player order."""
        utils = {tuple(prof): {a: as_fraction(v) for a, v in zip(players, pay)}
                 for prof, pay in payoffs.items()}
        return cls(tuple(players), {a: tuple(strategies[a]) for a in players}, utils)

    def profiles(self, restriction: Mapping[str, Iterable[str]] | None = None):
        sets = [tuple(restriction[a]) if restriction and a in restriction else self.strategies[a]
                for a in self.players]
        return product(*sets)

    def opponents(self, player: str) -> tuple[str, ...]:
        return tuple(a for a in self.players if a != player)

    def payoff(self, player: str, profile: Sequence[str]) -> Fraction:
        return self.utilities[tuple(profile)][player]

    def payoff_against(self, player: str, own: str, others: Mapping[str, str]) -> Fraction:
        profile = tuple(own if a == player else others[a] for a in self.players)
        return self.utilities[profile][player]

    def opponent_profiles(self, player: str, restriction: Mapping[str, Iterable[str]] | None = None):
        opps = self.opponents(player)
        sets = [tuple(restriction[b]) if restriction and b in restriction else self.strategies[b]
                for b in opps]
        for combo in product(*sets):
            yield dict(zip(opps, combo))


@dataclass(frozen=True)
class Dominance:
    dominated: bool
    weights: Mapping[str, Fraction] = field(default_factory=dict)
    margin: Fraction = Fraction(0)

    def __bool__(self):
        return self.dominated


def strictly_dominated(game: StrategicGame, player: str, strategy: str,
                       support: Iterable[str] | None = None,
                       restriction: Mapping[str, Iterable[str]] | None = None,
                       max_strategies: int = MAX_STRATEGIES) -> Dominance:
    """Is ``strategy`` strictly dominated by a mixture over ``support`` against every
    opponent pure profile allowed by ``restriction``?

    Solved as: maximize the margin e subject to, for every opponent profile q,
    sum_i x_i U(t_i, q) >= U(strategy, q) + e with x a probability vector. The
    strategy is dominated iff the optimal margin is positive; the optimal
    weights and margin are returned as a certificate.
    """
    support = tuple(game.strategies[player] if support is None else support)
    if strategy not in game.strategies[player]:
        raise GameError(f"{strategy!r} is not a strategy of {player!r}")
    if not support:
        raise GameError("empty candidate support")
    if len(support) > max_strategies:
        raise GameError(f"support of {len(support)} strategies exceeds the LP guard of {max_strategies}")
    rows = list(game.opponent_profiles(player, restriction))
    if not rows:
        raise GameError("opponent restriction leaves no profiles")
    k = len(support)
    # variables: x_1..x_k, e_plus, e_minus
    A_ub, b_ub = [], []
    for q in rows:
        base = game.payoff_against(player, strategy, q)
        A_ub.append([-game.payoff_against(player, t, q) for t in support] + [1, -1])
        b_ub.append(-base)
    A_eq = [[1] * k + [0, 0]]
    res = linprog([0] * k + [1, -1], A_ub, b_ub, A_eq, [1], maximize=True)
    if res.status != "optimal":  # pragma: no cover - feasible (pure strategy) and bounded
        raise GameError(f"dominance program unexpectedly {res.status}")
    margin = res.value
    weights = {t: w for t, w in zip(support, res.x[:k]) if w}
    return Dominance(margin > 0, weights, margin)


@dataclass
class IESDSResult:
    survivors: dict[str, tuple[str, ...]]
    rounds: list[dict[str, list[str]]]

    def as_dict(self) -> dict:
        return {"survivors": {a: list(s) for a, s in self.survivors.items()},
                "rounds": [{a: r for a, r in rnd.items() if r} for rnd in self.rounds]}


def iesds(game: StrategicGame, max_strategies: int = MAX_STRATEGIES) -> IESDSResult:
    """Iterated elimination of strictly dominated strategies, simultaneous per round."""
    alive = {a: tuple(game.strategies[a]) for a in game.players}
    rounds = []
    while True:
        removed: dict[str, list[str]] = {}
        for a in game.players:
            others = {b: alive[b] for b in game.players if b != a}
            removed[a] = [s for s in alive[a]
                          if strictly_dominated(game, a, s, alive[a], others, max_strategies)]
        if not any(removed.values()):
            return IESDSResult(alive, rounds)
        rounds.append(removed)
        alive = {a: tuple(s for s in alive[a] if s not in removed[a]) for a in game.players}
