"""Kripke models of strategic-form games and the alternating rationality check.

A model assigns each player a serial relation, a probability distribution per
world supported on the accessible worlds, and a strategy per world. The atom
``r_<player>`` must hold exactly where the player's strategy is a best response
to her beliefs; ``rp_<player>`` (optional) exactly where her beliefs treat the
opponents' strategies as independent.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Mapping

from ..formula import Atom, Formula, boxes
from ..kripke import KripkeModel, ModelChecker
from .game import StrategicGame, iesds


def rational_atom(player: str) -> str:
    return f"r_{player}"


def independence_atom(player: str) -> str:
    return f"rp_{player}"


@dataclass(frozen=True)
class EpistemicGameModel:
    game: StrategicGame
    worlds: tuple[str, ...]
    rel: Mapping[str, frozenset]
    beliefs: Mapping[str, Mapping[str, Mapping[str, Fraction]]]
    sigma: Mapping[str, Mapping[str, str]]
    val: Mapping[str, frozenset] = field(default_factory=dict)

    def successors(self, player: str, w: str) -> set:
        return {v for u, v in self.rel[player] if u == w}

    def kripke(self) -> KripkeModel:
        return KripkeModel(self.worlds, self.game.players, self.rel, self.val)

    def expected_utility(self, player: str, w: str, strategy: str) -> Fraction:
        total = Fraction(0)
        for v, p in self.beliefs[player][w].items():
            others = {b: self.sigma[b][v] for b in self.game.opponents(player)}
            total += p * self.game.payoff_against(player, strategy, others)
        return total

    def best_response(self, player: str, w: str) -> bool:
        mine = self.expected_utility(player, w, self.sigma[player][w])
        return all(mine >= self.expected_utility(player, w, s) for s in self.game.strategies[player])

    def independent(self, player: str, w: str) -> bool:
        opps = self.game.opponents(player)
        dist = self.beliefs[player][w]

        def mass(pred) -> Fraction:
            return sum((p for v, p in dist.items() if pred(v)), Fraction(0))

        for combo in product(*(self.game.strategies[b] for b in opps)):
            joint = mass(lambda v: all(self.sigma[b][v] == s for b, s in zip(opps, combo)))
            marginals = prod((mass(lambda v, b=b, s=s: self.sigma[b][v] == s) for b, s in zip(opps, combo)),
                             start=Fraction(1))
            if joint != marginals:
                return False
        return True

    def with_valuation(self) -> "EpistemicGameModel":
        """Copy whose r_ and rp_ atoms are set to the values the conditions require."""
        val = {p: ws for p, ws in self.val.items()}
        for a in self.game.players:
            val[rational_atom(a)] = frozenset(w for w in self.worlds if self.best_response(a, w))
            val[independence_atom(a)] = frozenset(w for w in self.worlds if self.independent(a, w))
        return EpistemicGameModel(self.game, self.worlds, self.rel, self.beliefs, self.sigma, val)


@dataclass(frozen=True)
class ModelVerdict:
    ok: bool
    clause: str | None = None
    detail: str | None = None

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        return {"valid": self.ok, "clause": self.clause, "detail": self.detail}


def validate_structure(egm: EpistemicGameModel) -> ModelVerdict:
    """Relations, beliefs and strategies only; the valuation is not looked at."""
    g = egm.game
    wset = set(egm.worlds)
    if not egm.worlds:
        return ModelVerdict(False, "worlds", "a model needs at least one world")
    for a in g.players:
        if a not in egm.rel:
            return ModelVerdict(False, "relation", f"no relation for {a}")
        for u, v in egm.rel[a]:
            if u not in wset or v not in wset:
                return ModelVerdict(False, "relation", f"{a}: edge ({u}, {v}) leaves the model")
        for w in egm.worlds:
            succ = egm.successors(a, w)
            if not succ:
                return ModelVerdict(False, "serial", f"{a} has no successor at {w}")
            dist = egm.beliefs.get(a, {}).get(w)
            if dist is None:
                return ModelVerdict(False, "distribution", f"no belief of {a} at {w}")
            if any(p < 0 for p in dist.values()):
                return ModelVerdict(False, "distribution", f"negative probability in {a}'s belief at {w}")
            if sum(dist.values(), Fraction(0)) != 1:
                return ModelVerdict(False, "distribution", f"{a}'s belief at {w} does not sum to 1")
            outside = sorted(v for v, p in dist.items() if p and v not in succ)
            if outside:
                return ModelVerdict(False, "support",
                                    f"{a}'s belief at {w} puts mass on {outside[0]} outside R_{a}({w})")
            s = egm.sigma.get(a, {}).get(w)
            if s not in g.strategies[a]:
                return ModelVerdict(False, "strategy", f"sigma_{a}({w}) = {s!r} is not a strategy of {a}")
    return ModelVerdict(True)


def validate_model(egm: EpistemicGameModel) -> ModelVerdict:
    """Check every model condition exactly; report the first violation."""
    verdict = validate_structure(egm)
    if not verdict:
        return verdict
    g = egm.game
    primed = any(independence_atom(a) in egm.val for a in g.players)
    for a in g.players:
        atom = rational_atom(a)
        marked = egm.val.get(atom, frozenset())
        for w in egm.worlds:
            if (w in marked) != egm.best_response(a, w):
                return ModelVerdict(False, "best-response",
                                    f"{atom} is {'true' if w in marked else 'false'} at {w} "
                                    f"but sigma_{a}({w}) is {'not ' if w in marked else ''}a best response")
        if primed:
            atom = independence_atom(a)
            marked = egm.val.get(atom, frozenset())
            for w in egm.worlds:
                if (w in marked) != egm.independent(a, w):
                    return ModelVerdict(False, "independence", f"{atom} has the wrong value at {w}")
    return ModelVerdict(True)


def alternating_sequences(players, length: int):
    """Sequences of the given length with no two consecutive entries equal."""
    def extend(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for a in players:
            if not prefix or prefix[-1] != a:
                yield from extend(prefix + [a])
    return extend([])


def rho(seq, primed: bool = False) -> Formula:
    atom = independence_atom(seq[-1]) if primed else rational_atom(seq[-1])
    return boxes(seq[:-1], Atom(atom))


def gamma(players, depth: int, primed: bool = False) -> list[Formula]:
    """All rho_l for alternating l of length 1..depth."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return [rho(seq, primed) for n in range(1, depth + 1) for seq in alternating_sequences(players, n)]


def saturation_depth(egm: EpistemicGameModel) -> int:
    """Depth from which the truncated set decides the whole infinite set.

    A formula of length n+1 constrains the ends of n-step alternating paths,
    whose (world, last agent) states all already occur at n <= |W|*|A|.
    """
    return len(egm.worlds) * len(egm.game.players) + 1


def alternating_reach(egm: EpistemicGameModel, world: str) -> dict[str, set]:
    """For each player a, the worlds reachable from ``world`` by an alternating path
    whose last move is not a's (the empty path counts)."""
    players = egm.game.players
    start = (world, None)
    seen = {start}
    stack = [start]
    while stack:
        w, last = stack.pop()
        for b in players:
            if b == last:
                continue
            for v in egm.successors(b, w):
                if (v, b) not in seen:
                    seen.add((v, b))
                    stack.append((v, b))
    return {a: {w for w, last in seen if last != a} for a in players}


@dataclass
class TheoremVerdict:
    status: str  # "pass" | "fail" | "vacuous"
    depth: int
    effective_depth: int
    gamma_holds: bool
    primed_holds: bool
    sigma: dict
    survivors: dict
    support_sets: dict
    rationalizable: str  # "pass" | "fail" | "vacuous" | "not checked"

    def as_dict(self) -> dict:
        return {
            "status": self.status, "depth": self.depth, "effective_depth": self.effective_depth,
            "gamma_holds": self.gamma_holds, "primed_holds": self.primed_holds,
            "sigma": self.sigma, "survivors": self.survivors,
            "support_sets": self.support_sets, "rationalizable": self.rationalizable,
        }


class InvalidModelError(ValueError):
    pass


def verify_theorem_A(egm: EpistemicGameModel, world: str, depth: int) -> TheoremVerdict:
    """If every rho_l holds at ``world``, every sigma_a(world) must survive IESDS.

    The formula set is infinite; ``depth`` is raised to the saturation depth when
    smaller, so the antecedent is decided exactly rather than approximated.
    """
    verdict = validate_model(egm)
    if not verdict:
        raise InvalidModelError(f"{verdict.clause}: {verdict.detail}")
    if world not in egm.worlds:
        raise InvalidModelError(f"unknown world {world!r}")
    players = egm.game.players
    eff = max(depth, saturation_depth(egm))
    checker = ModelChecker(egm.kripke())
    holds = all(checker.holds(world, f) for f in gamma(players, eff))
    primed = holds and all(checker.holds(world, f) for f in gamma(players, eff, primed=True))
    result = iesds(egm.game)
    sigma = {a: egm.sigma[a][world] for a in players}
    reach = alternating_reach(egm, world)
    support = {a: sorted({egm.sigma[a][w] for w in reach[a]}) for a in players}
    if not holds:
        status = "vacuous"
    else:
        status = "pass" if all(sigma[a] in result.survivors[a] for a in players) else "fail"
    if len(players) != 2:
        rationalizable = "not checked"
    elif not primed:
        rationalizable = "vacuous"
    else:
        # two players: rationalizable strategies are exactly the IESDS survivors
        rationalizable = status
    return TheoremVerdict(status, depth, eff, holds, primed, sigma,
                          {a: list(s) for a, s in result.survivors.items()}, support, rationalizable)
