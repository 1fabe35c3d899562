"""Axiom schemas and the logics built from them.

Schemas are written in the formula syntax with metavariables ``P`` and ``Q``
for formulas and ``X`` for an agent. Matching happens on core-normalized
forms, so a schema with a diamond also matches the equivalent boxed spelling.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from ..formula import And, Atom, Box, C, E, Formula, Implies, Not, conj, normalize, parse

FORMULA_VARS = frozenset({"P", "Q"})
AGENT_VAR = "X"

# name -> alternative spellings; a line matches the schema if it matches any of them
SCHEMA_SOURCES: dict[str, tuple[str, ...]] = {
    "K": ("[X](P -> Q) -> ([X]P -> [X]Q)",),
    "D": ("[X]P -> <X>P",),
    "T": ("[X]P -> P",),
    "B": ("P -> [X]<X>P", "<X>[X]P -> P"),
    "4": ("[X]P -> [X][X]P", "<X><X>P -> <X>P"),
    "5": ("<X>P -> [X]<X>P", "<X>[X]P -> [X]P"),
    "CK": ("(C P & C(P -> Q)) -> C Q",),
    "EK": ("(E P & E(P -> Q)) -> E Q",),
    "CInd": ("(C(P -> E P) & E P) -> C P",),
    "EBox": ("E P -> [X]P",),
    "CFix": ("C P -> E(P & C P)",),
}
COMMON_SCHEMAS = ("CK", "EK", "CInd", "EBox", "CFix", "EIntro")

CUBE: dict[str, tuple[str, ...]] = {
    "K": ("K",),
    "KD": ("K", "D"),
    "T": ("K", "T"),
    "KB": ("K", "B"),
    "K4": ("K", "4"),
    "K5": ("K", "5"),
    "K45": ("K", "4", "5"),
    "KD4": ("K", "D", "4"),
    "KD5": ("K", "D", "5"),
    "KD45": ("K", "D", "4", "5"),
    "KDB": ("K", "D", "B"),
    "B": ("K", "T", "B"),
    "S4": ("K", "T", "4"),
    "S5": ("K", "T", "5"),
    "KB5": ("K", "B", "5"),
}
# aliases used in the literature for the same systems
LOGIC_ALIASES = {"KT": "T", "KTB": "B", "KT4": "S4", "KT5": "S5"}


@dataclass(frozen=True)
class Logic:
    name: str
    base: str
    schemas: tuple[str, ...]
    common: bool

    @property
    def frame_class(self) -> str:
        return self.base


def logic(name: str) -> Logic:
    """Look up a cube logic (``KD45``) or its common-belief variant (``CKD45``)."""
    key = LOGIC_ALIASES.get(name, name)
    if key in CUBE:
        return Logic(name, key, CUBE[key], False)
    if key.startswith("C"):
        base = LOGIC_ALIASES.get(key[1:], key[1:])
        if base in CUBE:
            return Logic(name, base, CUBE[base] + COMMON_SCHEMAS, True)
    raise KeyError(f"unknown logic {name!r}")


def logic_names() -> list[str]:
    return list(CUBE) + ["C" + k for k in CUBE]


@lru_cache(maxsize=None)
def _patterns(name: str) -> tuple[Formula, ...]:
    return tuple(normalize(parse(src)) for src in SCHEMA_SOURCES[name])


def intro_pattern(agents: Iterable[str]) -> Formula:
    """``([a1]P & [a2]P & ...) -> E P`` over the agent universe, in the given order."""
    boxes = [Box(a, Atom("P")) for a in agents]
    return normalize(Implies(conj(*boxes), E(Atom("P"))))


def patterns(name: str, agents: Iterable[str]) -> tuple[Formula, ...]:
    if name == "EIntro":
        return (intro_pattern(agents),)
    if name not in SCHEMA_SOURCES:
        raise KeyError(f"unknown schema {name!r}")
    return _patterns(name)


@dataclass(frozen=True)
class SchemaInstance:
    schema: str
    formulas: dict
    agent: str | None


def _match(pat: Formula, f: Formula, binding: dict) -> bool:
    if isinstance(pat, Atom) and pat.name in FORMULA_VARS:
        bound = binding.get(pat.name)
        if bound is None:
            binding[pat.name] = f
            return True
        return bound == f
    if type(pat) is not type(f):
        return False
    if isinstance(pat, Atom):
        return pat.name == f.name
    if isinstance(pat, Box):
        if pat.agent == AGENT_VAR:
            bound = binding.get(AGENT_VAR)
            if bound is None:
                binding[AGENT_VAR] = f.agent
            elif bound != f.agent:
                return False
        elif pat.agent != f.agent:
            return False
        return _match(pat.arg, f.arg, binding)
    if isinstance(pat, (Not, C, E)):
        return _match(pat.arg, f.arg, binding)
    if isinstance(pat, And):
        return _match(pat.left, f.left, binding) and _match(pat.right, f.right, binding)
    return False


def match_schema(name: str, f: Formula, agents: Iterable[str]) -> SchemaInstance | None:
    """Uniform instance of schema ``name`` matching ``f``, or None."""
    agents = tuple(agents)
    g = normalize(f)
    for pat in patterns(name, agents):
        binding: dict = {}
        if _match(pat, g, binding):
            agent = binding.pop(AGENT_VAR, None)
            if agent is not None and agent not in agents:
                continue
            return SchemaInstance(name, binding, agent)
    return None
