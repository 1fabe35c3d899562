"""Model transformations behind the collapse results.

``alt_unravel`` builds a depth-bounded agent-alternating unraveling, optionally
completed with same-agent edges that make every relation transitive and
Euclidean (``k45``) or symmetric (``b``). ``nr_partition`` turns a reflexive
model into a partition model that agrees on agent-nonrepeating formulas.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .bisim import ALT, ALTERNATING, NONREPEATING, BisimFamily, indices
from .kripke import KripkeModel, PointedModel

COMPLETIONS = ("none", "k45", "b")
NO_AGENT = "*"  # marks the first element of a partition trace

Trace = tuple[tuple[object, str], ...]


class TransformError(ValueError):
    pass


def trace_name(trace: Trace) -> str:
    parts = []
    for tag, w in trace:
        if isinstance(tag, frozenset):
            tag = "{" + ",".join(sorted(tag)) + "}"
        parts.append(f"{tag}:{w}")
    return "/".join(parts)


@dataclass(frozen=True)
class Unraveling(PointedModel):
    depth: int = 0
    completion: str = "none"
    traces: Mapping[str, Trace] = field(default_factory=dict, compare=False, repr=False)

    def interior(self) -> list[str]:
        """Worlds whose trace is short enough to still have full successors."""
        return [w for w, t in self.traces.items() if len(t) <= self.depth]


def alt_unravel(pm: PointedModel, depth: int, completion: str = "none") -> Unraveling:
    if depth < 1:
        raise TransformError("unraveling depth must be at least 1")
    if completion not in COMPLETIONS:
        raise TransformError(f"unknown completion {completion!r}; choose from {COMPLETIONS}")
    m = pm.model
    if not m.worlds:
        raise TransformError("cannot unravel an empty model")
    if ALT in m.agents:
        raise TransformError(f"agent name {ALT!r} is reserved")

    root: Trace = ((ALT, pm.point),)
    traces = [root]
    children: dict[Trace, dict[str, list[Trace]]] = {}
    frontier = [root]
    while frontier:
        nxt = []
        for s in frontier:
            kids = children.setdefault(s, {b: [] for b in m.agents})
            if len(s) > depth:
                continue
            last_tag, last_world = s[-1]
            for b in m.agents:
                if b == last_tag:
                    continue
                for v in sorted(m.succ[b][last_world]):
                    t = s + ((b, v),)
                    kids[b].append(t)
                    nxt.append(t)
        traces.extend(nxt)
        frontier = nxt

    rel: dict[str, set] = {b: set() for b in m.agents}
    for s in traces:
        last_tag = s[-1][0]
        for b in m.agents:
            if b != last_tag:
                rel[b].update((s, t) for t in children[s][b])
            elif completion == "k45":
                rel[b].update((s, t) for t in children[s[:-1]][b])
            elif completion == "b":
                rel[b].add((s, s[:-1]))

    names = {s: trace_name(s) for s in traces}
    val: dict[str, set] = {p: set() for p in m.val}
    for s in traces:
        for p in m.label(s[-1][1]):
            val[p].add(names[s])
    out = KripkeModel([names[s] for s in traces], m.agents,
                      {b: [(names[s], names[t]) for s, t in r] for b, r in rel.items()}, val)
    return Unraveling(out, names[root], f"unravel({pm.name or 'model'})", "",
                      depth, completion, {names[s]: s for s in traces})


def projection_family(pm: PointedModel, unr: Unraveling) -> BisimFamily:
    """Pairs (w, s) with s ending in (x, w), at index x, layered by remaining depth.

    Layer k keeps pairs whose trace has length at most depth+1-k, so every
    layer-(k+1) pair only needs successors inside layer k.
    """
    agents = tuple(sorted(pm.model.agents))
    layers = []
    for k in range(unr.depth + 1):
        rel = {i: set() for i in indices(ALTERNATING, agents)}
        for name, trace in unr.traces.items():
            if len(trace) <= unr.depth + 1 - k:
                tag, w = trace[-1]
                rel[tag].add((w, name))
        layers.append({i: frozenset(r) for i, r in rel.items()})
    return BisimFamily(ALTERNATING, agents, layers[-1], unr.depth, tuple(layers))


# --- partition models for the nonrepeating fragment -----------------------------------

def last_agent(trace: Trace):
    """The agent whose relation produced the last step (NO_AGENT for the root)."""
    if len(trace) == 1:
        return NO_AGENT
    (removed,) = trace[-2][0] - trace[-1][0]
    return removed


def predecessor(trace: Trace, agent: str) -> Trace:
    """The ``agent``-predecessor: drop the last step iff ``agent`` produced it."""
    return trace[:-1] if last_agent(trace) == agent else trace


@dataclass(frozen=True)
class PartitionModel(PointedModel):
    traces: Mapping[str, Trace] = field(default_factory=dict, compare=False, repr=False)


def nr_partition(pm: PointedModel) -> PartitionModel:
    m = pm.model
    for a in m.agents:
        missing = [w for w in m.worlds if w not in m.succ[a][w]]
        if missing:
            raise TransformError(f"relation of agent {a!r} is not reflexive at {missing[0]!r}")
    top = frozenset(m.agents)
    root: Trace = ((top, pm.point),)
    traces = [root]
    frontier = [root]
    while frontier:
        nxt = []
        for s in frontier:
            xs, w = s[-1]
            for a in sorted(xs):
                for v in sorted(m.succ[a][w]):
                    nxt.append(s + ((xs - {a}, v),))
        traces.extend(nxt)
        frontier = nxt

    names = {s: trace_name(s) for s in traces}
    rel = {}
    for a in m.agents:
        classes: dict[Trace, list[str]] = {}
        for s in traces:
            classes.setdefault(predecessor(s, a), []).append(names[s])
        rel[a] = [(x, y) for members in classes.values() for x in members for y in members]
    val: dict[str, list] = {p: [] for p in m.val}
    for s in traces:
        for p in m.label(s[-1][1]):
            val[p].append(names[s])
    out = KripkeModel([names[s] for s in traces], m.agents, rel, val)
    return PartitionModel(out, names[root], f"partition({pm.name or 'model'})", "",
                          {names[s]: s for s in traces})


def partition_family(pm: PointedModel, part: PartitionModel) -> BisimFamily:
    """Relate u to s at X whenever s ends in (Y, u) with X a subset of Y."""
    agents = tuple(sorted(pm.model.agents))
    rel = {}
    for x in indices(NONREPEATING, agents):
        pairs = frozenset((t[-1][1], name) for name, t in part.traces.items() if x <= t[-1][0])
        if pairs:
            rel[x] = pairs
    return BisimFamily(NONREPEATING, agents, rel, None)
