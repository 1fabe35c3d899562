"""Random games and random valid epistemic game models."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .epistemic import EpistemicGameModel
from .game import StrategicGame


def random_rational(rng: random.Random, max_den: int = 6, bound: int = 5) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * den, bound * den), den)


def random_game(rng: random.Random, sizes=(3, 3), max_den: int = 6) -> StrategicGame:
    players = tuple(str(i + 1) for i in range(len(sizes)))
    strategies = {a: tuple(f"s{a}{j}" for j in range(k)) for a, k in zip(players, sizes)}
    utils = {prof: {a: random_rational(rng, max_den) for a in players}
             for prof in product(*(strategies[a] for a in players))}
    return StrategicGame(players, strategies, utils)


def random_epistemic_model(rng: random.Random, game: StrategicGame, n_worlds: int,
                           edge_prob: float = 0.5, br_rounds: int = 3) -> EpistemicGameModel:
    """A valid model: serial relations, beliefs supported on successors, and
    strategies improved by a few rounds of best-response updates so that the
    rationality atoms are often true."""
    worlds = tuple(f"w{i}" for i in range(n_worlds))
    rel, beliefs = {}, {}
    for a in game.players:
        pairs = set()
        beliefs[a] = {}
        for w in worlds:
            succ = [v for v in worlds if rng.random() < edge_prob] or [rng.choice(worlds)]
            pairs.update((w, v) for v in succ)
            weights = [rng.randint(1, 4) for _ in succ]
            total = sum(weights)
            beliefs[a][w] = {v: Fraction(k, total) for v, k in zip(succ, weights)}
        rel[a] = frozenset(pairs)
    sigma = {a: {w: rng.choice(game.strategies[a]) for w in worlds} for a in game.players}
    egm = EpistemicGameModel(game, worlds, rel, beliefs, sigma, {})
    for _ in range(br_rounds):
        for a in game.players:
            new = dict(sigma[a])
            for w in worlds:
                scores = {s: egm.expected_utility(a, w, s) for s in game.strategies[a]}
                best = max(scores.values())
                new[w] = min(s for s, v in scores.items() if v == best)
            sigma = {**sigma, a: new}
            egm = EpistemicGameModel(game, worlds, rel, beliefs, sigma, {})
    return egm.with_valuation()
