"""Random and exhaustive generators for formulas and models."""
from __future__ import annotations

import random
from itertools import product
from typing import Iterable, Iterator, Sequence

from .formula import (And, Atom, Box, C, CHat, Diamond, E, EHat, Formula, Iff, Implies, Not,
                      Or)
from .kripke import KripkeModel, PointedModel

DEFAULT_SEED = 1729


def random_formula(rng: random.Random, agents: Sequence[str], atoms: Sequence[str],
                   height: int, sugar: bool = False, common: bool = False) -> Formula:
    """A random formula of height at most ``height``."""
    if height <= 0 or rng.random() < 0.15:
        return Atom(rng.choice(atoms))
    ops = ["not", "and", "box"]
    if sugar:
        ops += ["or", "imp", "iff", "dia"]
    if common:
        ops += ["C", "E"] + (["CHat", "EHat"] if sugar else [])
    op = rng.choice(ops)
    sub = lambda: random_formula(rng, agents, atoms, height - 1, sugar, common)  # noqa: E731
    if op == "not":
        return Not(sub())
    if op == "box":
        return Box(rng.choice(agents), sub())
    if op == "dia":
        return Diamond(rng.choice(agents), sub())
    if op in ("C", "E", "CHat", "EHat"):
        return {"C": C, "E": E, "CHat": CHat, "EHat": EHat}[op](sub())
    binary = {"and": And, "or": Or, "imp": Implies, "iff": Iff}[op]
    return binary(sub(), sub())


def random_minus_formula(rng: random.Random, agents: Sequence[str], atoms: Sequence[str],
                         depth: int, forbidden: str | None = None, size: int = 6) -> Formula:
    """A random member of ``L_-forbidden`` (of ``L_alt`` when ``forbidden`` is None)
    with modal depth at most ``depth``. ``size`` bounds the Boolean branching."""
    if size <= 1 or rng.random() < 0.2:
        return Atom(rng.choice(atoms))
    allowed = [b for b in agents if b != forbidden]
    choice = rng.random()
    if depth > 0 and allowed and choice < 0.45:
        b = rng.choice(allowed)
        return Box(b, random_minus_formula(rng, agents, atoms, depth - 1, b, size - 1))
    if choice < 0.7:
        return Not(random_minus_formula(rng, agents, atoms, depth, forbidden, size - 1))
    half = max(1, (size - 1) // 2)
    return And(random_minus_formula(rng, agents, atoms, depth, forbidden, half),
               random_minus_formula(rng, agents, atoms, depth, forbidden, half))


def random_alt_formula(rng, agents, atoms, depth, size=6) -> Formula:
    return random_minus_formula(rng, agents, atoms, depth, None, size)


def random_lx_formula(rng: random.Random, allowed: Iterable[str], atoms: Sequence[str],
                      size: int = 6) -> Formula:
    """A random member of ``L_X`` for ``X = allowed``."""
    allowed = sorted(allowed)
    if size <= 1 or rng.random() < 0.2:
        return Atom(rng.choice(atoms))
    choice = rng.random()
    if allowed and choice < 0.45:
        x = rng.choice(allowed)
        return Box(x, random_lx_formula(rng, set(allowed) - {x}, atoms, size - 1))
    if choice < 0.7:
        return Not(random_lx_formula(rng, allowed, atoms, size - 1))
    half = max(1, (size - 1) // 2)
    return And(random_lx_formula(rng, allowed, atoms, half),
               random_lx_formula(rng, allowed, atoms, half))


# --- models ------------------------------------------------------------------------------

def close_relation(rng: random.Random, worlds: Sequence[str], pairs: set,
                   properties: Iterable[str]) -> set:
    """Smallest-ish superset of ``pairs`` with the given properties.

    Every step only adds edges, so the loop terminates (the full relation has
    all five properties). Seriality picks a random successor for dead ends.
    """
    props = set(properties)
    rel = set(pairs)
    while True:
        before = len(rel)
        if "reflexive" in props:
            rel |= {(w, w) for w in worlds}
        if "symmetric" in props:
            rel |= {(v, u) for u, v in rel}
        if "transitive" in props:
            rel |= {(u, x) for u, v in rel for v2, x in rel if v == v2}
        if "euclidean" in props:
            rel |= {(v, x) for u, v in rel for u2, x in rel if u == u2}
        if "serial" in props:
            heads = {u for u, _ in rel}
            for w in worlds:
                if w not in heads:
                    rel.add((w, rng.choice(list(worlds))))
        if len(rel) == before:
            return rel


def random_model(rng: random.Random, n_worlds: int, agents: Sequence[str] = ("a", "b"),
                 atoms: Sequence[str] = ("p", "q"), edge_prob: float = 0.3,
                 properties: Iterable[str] = ()) -> PointedModel:
    worlds = [f"w{i}" for i in range(n_worlds)]
    rel = {}
    for a in agents:
        pairs = {(u, v) for u in worlds for v in worlds if rng.random() < edge_prob}
        rel[a] = close_relation(rng, worlds, pairs, properties)
    val = {p: [w for w in worlds if rng.random() < 0.5] for p in atoms}
    return PointedModel(KripkeModel(worlds, agents, rel, val), rng.choice(worlds))


# --- exhaustive enumeration ------------------------------------------------------------------

def formulas_up_to_height(height: int, agents: Sequence[str], atoms: Sequence[str]) -> list[Formula]:
    """Every core (C/E-free) formula of height at most ``height``, each exactly once."""
    levels: list[list[Formula]] = [[Atom(p) for p in atoms]]
    for _ in range(height):
        below = [f for level in levels for f in level]
        last = levels[-1]
        new = []
        for f in last:
            new.append(Not(f))
            new.extend(Box(a, f) for a in agents)
        for f, g in product(below, below):
            if f in last or g in last:
                new.append(And(f, g))
        levels.append(new)
    return [f for level in levels for f in level]


def all_relations(worlds: Sequence[str]) -> Iterator[frozenset]:
    pairs = [(u, v) for u in worlds for v in worlds]
    for mask in range(1 << len(pairs)):
        yield frozenset(pairs[i] for i in range(len(pairs)) if mask >> i & 1)
