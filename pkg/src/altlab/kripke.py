"""Finite multi-agent Kripke models and formula evaluation."""
from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .formula import (And, Atom, Box, C, E, Formula, Not, agents as formula_agents,
                      normalize)

log = logging.getLogger(__name__)

PROPERTIES = ("serial", "reflexive", "transitive", "euclidean", "symmetric")


class ModelError(ValueError):
    """Invalid model data; ``path`` points at the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class KripkeModel:
    worlds: tuple[str, ...]
    agents: tuple[str, ...]
    rel: Mapping[str, frozenset]
    val: Mapping[str, frozenset]
    succ: Mapping[str, Mapping[str, frozenset]] = field(init=False, repr=False, compare=False)

    def __init__(self, worlds: Iterable[str], agents: Iterable[str],
                 rel: Mapping[str, Iterable[tuple[str, str]]],
                 val: Mapping[str, Iterable[str]]):
        worlds = tuple(dict.fromkeys(worlds))
        agents = tuple(dict.fromkeys(agents))
        wset = set(worlds)
        rel_ = {}
        for a in agents:
            pairs = frozenset((u, v) for u, v in rel.get(a, ()))
            for i, (u, v) in enumerate(sorted(pairs)):
                if u not in wset or v not in wset:
                    raise ModelError(f"rel.{a}[{i}]", f"edge ({u}, {v}) mentions an undeclared world")
            rel_[a] = pairs
        for a in rel:
            if a not in rel_:
                raise ModelError(f"rel.{a}", "relation for an agent outside the universe")
        val_ = {}
        for p, ws in val.items():
            ws = frozenset(ws)
            bad = sorted(ws - wset)
            if bad:
                raise ModelError(f"val.{p}", f"undeclared world {bad[0]!r}")
            val_[p] = ws
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "rel", rel_)
        object.__setattr__(self, "val", val_)
        succ = {a: {w: set() for w in worlds} for a in agents}
        for a, pairs in rel_.items():
            for u, v in pairs:
                succ[a][u].add(v)
        object.__setattr__(self, "succ", {a: {w: frozenset(s) for w, s in d.items()}
                                           for a, d in succ.items()})

    def __hash__(self):
        return hash((self.worlds, self.agents,
                     tuple(sorted((a, tuple(sorted(r))) for a, r in self.rel.items()))))

    def __eq__(self, other):
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (set(self.worlds) == set(other.worlds) and set(self.agents) == set(other.agents)
                and dict(self.rel) == dict(other.rel)
                and {p: w for p, w in self.val.items() if w} == {p: w for p, w in other.val.items() if w})

    def successors(self, agent: str, world: str) -> frozenset:
        return self.succ[agent][world]

    def union_successors(self, world: str) -> set:
        out = set()
        for a in self.agents:
            out |= self.succ[a][world]
        return out

    def reachable(self, world: str) -> set:
        """Worlds reachable in one or more steps of the union relation."""
        seen: set = set()
        queue = deque(self.union_successors(world))
        while queue:
            v = queue.popleft()
            if v in seen:
                continue
            seen.add(v)
            queue.extend(self.union_successors(v) - seen)
        return seen

    def label(self, world: str) -> frozenset:
        """Atoms true at ``world``."""
        return frozenset(p for p, ws in self.val.items() if world in ws)

    def edge_count(self, agent: str | None = None) -> int:
        if agent is not None:
            return len(self.rel[agent])
        return sum(len(r) for r in self.rel.values())

    def with_edges(self, agent: str, add=(), remove=()) -> "KripkeModel":
        rel = dict(self.rel)
        rel[agent] = (rel[agent] | frozenset(add)) - frozenset(remove)
        return KripkeModel(self.worlds, self.agents, rel, self.val)

    def to_dict(self, point: str | None = None) -> dict:
        d = {
            "agents": list(self.agents),
            "worlds": list(self.worlds),
            "rel": {a: sorted([u, v] for u, v in self.rel[a]) for a in self.agents},
            "val": {p: sorted(ws) for p, ws in sorted(self.val.items())},
        }
        if point is not None:
            d["point"] = point
        return d


@dataclass(frozen=True)
class PointedModel:
    model: KripkeModel
    point: str
    name: str = ""
    doc: str = field(default="", compare=False, repr=False)

    def __post_init__(self):
        if self.point not in self.model.worlds:
            raise ModelError("point", f"{self.point!r} is not a world of the model")

    def at(self, world: str) -> "PointedModel":
        return PointedModel(self.model, world, self.name, self.doc)

    def to_dict(self) -> dict:
        return self.model.to_dict(self.point)


# --- frame properties ----------------------------------------------------------------

def relation_properties(worlds: Iterable[str], pairs: Iterable[tuple[str, str]]) -> dict[str, bool]:
    """Direct quantifier checks of the five frame conditions."""
    worlds = list(worlds)
    pairs = set(pairs)
    succ = {w: {v for u, v in pairs if u == w} for w in worlds}
    return {
        "serial": all(succ[w] for w in worlds),
        "reflexive": all((w, w) in pairs for w in worlds),
        "transitive": all((u, x) in pairs for u, v in pairs for x in succ[v]),
        "euclidean": all((v, x) in pairs for u in worlds for v in succ[u] for x in succ[u]),
        "symmetric": all((v, u) in pairs for u, v in pairs),
    }


def frame_properties(m: KripkeModel) -> dict[str, dict[str, bool]]:
    return {a: relation_properties(m.worlds, m.rel[a]) for a in m.agents}


# alias -> per-agent properties, following the modal cube
FRAME_ALIASES: dict[str, frozenset] = {
    "K": frozenset(),
    "KD": frozenset({"serial"}),
    "T": frozenset({"reflexive"}),
    "KB": frozenset({"symmetric"}),
    "K4": frozenset({"transitive"}),
    "K5": frozenset({"euclidean"}),
    "K45": frozenset({"transitive", "euclidean"}),
    "KD4": frozenset({"serial", "transitive"}),
    "KD5": frozenset({"serial", "euclidean"}),
    "KD45": frozenset({"serial", "transitive", "euclidean"}),
    "KDB": frozenset({"serial", "symmetric"}),
    "B": frozenset({"reflexive", "symmetric"}),
    "S4": frozenset({"reflexive", "transitive"}),
    "S5": frozenset({"reflexive", "transitive", "euclidean"}),
    "KB5": frozenset({"symmetric", "euclidean"}),
}
# the common-belief logics are evaluated over the frames of their base logic
for _base in ("K", "KD", "K4", "KD4", "K5", "KD5", "K45", "KD45", "T", "S4", "S5", "B", "KB", "KDB", "KB5"):
    FRAME_ALIASES["C" + _base] = FRAME_ALIASES[_base]


@dataclass(frozen=True)
class FrameClass:
    """A per-agent frame condition (the same properties for every agent)."""
    properties: frozenset
    name: str = ""

    @classmethod
    def named(cls, name: str) -> "FrameClass":
        """An alias (``S4``, ``KD45`` ...) or ``+``-joined properties (``transitive+serial``)."""
        if name in FRAME_ALIASES:
            return cls(FRAME_ALIASES[name], name)
        props = frozenset(p.strip().lower() for p in name.split("+") if p.strip())
        unknown = props - set(PROPERTIES)
        if unknown or not props:
            raise ValueError(f"unknown frame class {name!r}")
        return cls(props, name)

    def admits(self, props: Mapping[str, bool]) -> bool:
        return all(props[p] for p in self.properties)

    def contains(self, m: KripkeModel) -> bool:
        return all(self.admits(p) for p in frame_properties(m).values())

    def __str__(self):
        return self.name or "+".join(sorted(self.properties)) or "K"


# --- satisfaction ------------------------------------------------------------------------

class _Evaluator:
    def __init__(self, m: KripkeModel):
        self.m = m
        self.all = frozenset(m.worlds)
        self.cache: dict[Formula, frozenset] = {}
        self._reach: dict[str, set] | None = None

    def reach(self, w: str) -> set:
        if self._reach is None:
            self._reach = {}
        if w not in self._reach:
            self._reach[w] = self.m.reachable(w)
        return self._reach[w]

    def ext(self, f: Formula) -> frozenset:
        hit = self.cache.get(f)
        if hit is not None:
            return hit
        m = self.m
        if isinstance(f, Atom):
            if f.name not in m.val:
                log.warning("atom %r not in model valuation; evaluating as false", f.name)
                out = frozenset()
            else:
                out = m.val[f.name]
        elif isinstance(f, Not):
            out = self.all - self.ext(f.arg)
        elif isinstance(f, And):
            out = self.ext(f.left) & self.ext(f.right)
        elif isinstance(f, Box):
            if f.agent not in m.succ:
                raise ValueError(f"agent {f.agent!r} not in model agents {list(m.agents)}")
            inner = self.ext(f.arg)
            succ = m.succ[f.agent]
            out = frozenset(w for w in m.worlds if succ[w] <= inner)
        elif isinstance(f, E):
            inner = self.ext(f.arg)
            out = frozenset(w for w in m.worlds if m.union_successors(w) <= inner)
        elif isinstance(f, C):
            inner = self.ext(f.arg)
            out = frozenset(w for w in m.worlds if self.reach(w) <= inner)
        else:
            raise TypeError(f"not a core formula: {f!r}")
        self.cache[f] = out
        return out


def extension(m: KripkeModel, f: Formula) -> frozenset:
    """Set of worlds of ``m`` satisfying ``f``."""
    return _Evaluator(m).ext(normalize(f))


def model_check(pm: PointedModel, f: Formula) -> bool:
    missing = formula_agents(f) - set(pm.model.agents)
    if missing:
        raise ValueError(f"formula agents {sorted(missing)} not in model agents {list(pm.model.agents)}")
    return pm.point in extension(pm.model, f)


class ModelChecker:
    """Re-usable evaluator for checking many formulas against one model."""

    def __init__(self, m: KripkeModel):
        self.model = m
        self._ev = _Evaluator(m)

    def extension(self, f: Formula) -> frozenset:
        return self._ev.ext(normalize(f))

    def holds(self, world: str, f: Formula) -> bool:
        return world in self.extension(f)


# --- file format --------------------------------------------------------------------------

def model_from_dict(d) -> tuple[KripkeModel, str | None]:
    """Build a model from the JSON document layout; returns (model, point)."""
    if not isinstance(d, dict):
        raise ModelError("$", "model document must be an object")
    for key in ("agents", "worlds"):
        if key not in d:
            raise ModelError(key, "missing field")
        if not isinstance(d[key], list) or not all(isinstance(x, str) for x in d[key]):
            raise ModelError(key, "must be an array of strings")
    if len(set(d["worlds"])) != len(d["worlds"]):
        raise ModelError("worlds", "duplicate world")
    if not d["worlds"]:
        raise ModelError("worlds", "a model needs at least one world")
    rel = d.get("rel", {})
    if not isinstance(rel, dict):
        raise ModelError("rel", "must be an object")
    pairs = {}
    for a, lst in rel.items():
        if a not in d["agents"]:
            raise ModelError(f"rel.{a}", "agent not declared in agents")
        if not isinstance(lst, list):
            raise ModelError(f"rel.{a}", "must be an array of [from, to] pairs")
        for i, e in enumerate(lst):
            if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
                raise ModelError(f"rel.{a}[{i}]", "must be a [from, to] pair of world names")
            for x in e:
                if x not in d["worlds"]:
                    raise ModelError(f"rel.{a}[{i}]", f"undeclared world {x!r}")
        pairs[a] = [tuple(e) for e in lst]
    val = d.get("val", {})
    if not isinstance(val, dict):
        raise ModelError("val", "must be an object")
    for p, ws in val.items():
        if not isinstance(ws, list):
            raise ModelError(f"val.{p}", "must be an array of worlds")
        for i, w in enumerate(ws):
            if w not in d["worlds"]:
                raise ModelError(f"val.{p}[{i}]", f"undeclared world {w!r}")
    point = d.get("point")
    if point is not None and point not in d["worlds"]:
        raise ModelError("point", f"undeclared world {point!r}")
    return KripkeModel(d["worlds"], d["agents"], pairs, val), point


def load_model(text: str) -> tuple[KripkeModel, str | None]:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError("$", f"not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    return model_from_dict(d)


def dump_model(m: KripkeModel, point: str | None = None) -> str:
    return json.dumps(m.to_dict(point), indent=2, sort_keys=True)
