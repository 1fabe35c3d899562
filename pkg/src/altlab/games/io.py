"""JSON documents for games and epistemic game models.

Rationals are written as ``"num/den"`` strings; integers and integer strings
are accepted on input. Floats are rejected to keep everything exact.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .epistemic import EpistemicGameModel, validate_structure
from .game import GameError, StrategicGame, as_fraction


def rational_text(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def game_from_dict(d: dict) -> StrategicGame:
    try:
        players = [str(a) for a in d["players"]]
        strategies = {a: [str(s) for s in d["strategies"][a]] for a in players}
        utilities = {}
        for i, entry in enumerate(d["utilities"]):
            profile = tuple(str(s) for s in entry["profile"])
            pay = entry["payoffs"]
            if isinstance(pay, dict):
                utilities[profile] = {a: as_fraction(pay[a]) for a in players}
            else:
                if len(pay) != len(players):
                    raise GameError(f"utilities[{i}]: expected {len(players)} payoffs")
                utilities[profile] = {a: as_fraction(v) for a, v in zip(players, pay)}
    except KeyError as exc:
        raise GameError(f"missing field {exc.args[0]!r}") from None
    return StrategicGame(tuple(players), {a: tuple(s) for a, s in strategies.items()}, utilities)


def model_from_dict(d: dict, game: StrategicGame | None = None) -> EpistemicGameModel:
    """Build the ``epistemic`` block. Without ``val`` the r_/rp_ atoms are derived when the
    structure allows it."""
    game = game or game_from_dict(d)
    e = d.get("epistemic")
    if e is None:
        raise GameError("document has no 'epistemic' block")
    try:
        worlds = tuple(str(w) for w in e["worlds"])
        rel = {a: frozenset((str(u), str(v)) for u, v in e["rel"].get(a, ())) for a in game.players}
        beliefs = {a: {w: {v: as_fraction(p) for v, p in dist.items()}
                       for w, dist in e["beliefs"].get(a, {}).items()} for a in game.players}
        sigma = {a: {w: str(s) for w, s in e["sigma"].get(a, {}).items()} for a in game.players}
    except KeyError as exc:
        raise GameError(f"epistemic block is missing {exc.args[0]!r}") from None
    if len(set(worlds)) != len(worlds):
        raise GameError("duplicate world names")
    if "val" in e:
        val = {p: frozenset(ws) for p, ws in e["val"].items()}
        return EpistemicGameModel(game, worlds, rel, beliefs, sigma, val)
    raw = EpistemicGameModel(game, worlds, rel, beliefs, sigma, {})
    # a structurally broken model keeps its empty valuation so validation names the real fault
    return raw.with_valuation() if validate_structure(raw) else raw


def load_game(text: str) -> tuple[StrategicGame, EpistemicGameModel | None]:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameError(f"invalid JSON: {exc}") from None
    if not isinstance(d, dict):
        raise GameError("game document must be an object")
    game = game_from_dict(d)
    return game, (model_from_dict(d, game) if "epistemic" in d else None)


def game_to_dict(game: StrategicGame) -> dict:
    return {
        "players": list(game.players),
        "strategies": {a: list(game.strategies[a]) for a in game.players},
        "utilities": [{"profile": list(p),
                       "payoffs": [rational_text(game.utilities[p][a]) for a in game.players]}
                      for p in game.profiles()],
    }


def model_to_dict(egm: EpistemicGameModel) -> dict:
    d = game_to_dict(egm.game)
    d["epistemic"] = {
        "worlds": list(egm.worlds),
        "rel": {a: sorted([u, v] for u, v in egm.rel[a]) for a in egm.game.players},
        "beliefs": {a: {w: {v: rational_text(p) for v, p in sorted(dist.items())}
                        for w, dist in egm.beliefs[a].items()} for a in egm.game.players},
        "sigma": {a: dict(egm.sigma[a]) for a in egm.game.players},
        "val": {p: sorted(ws) for p, ws in sorted(egm.val.items())},
    }
    return d
