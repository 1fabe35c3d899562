"""Plain, agent-alternating and agent-nonrepeating bisimulation families.

A family is a map from indices to sets of (world of M, world of N) pairs.
Each kind fixes, per index, the moves a related pair has to match: a move
``(b, j)`` asks that every ``b``-successor on one side be matched by a
``b``-successor on the other side related at index ``j``.

* plain: one index; every agent moves back into it.
* alternating: one index per agent plus ``alt``. Index ``a`` matches moves by
  every ``b != a`` into index ``b``; ``alt`` matches every agent ``b`` into ``b``.
  Pairs at index ``a`` agree on formulas in ``L_-a``; at ``alt`` on ``L_alt``.
* nonrepeating: indices are agent sets ``X``; index ``X`` matches a move by
  ``x in X`` into ``X - {x}``. Pairs at ``X`` agree on ``L_X``.

The greatest family is reached by deleting violating pairs in simultaneous
rounds from the full atom-respecting relations. The depth-``n`` family is
exactly the result of ``n`` such rounds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Mapping

from .kripke import KripkeModel

PLAIN = "plain"
ALTERNATING = "alternating"
NONREPEATING = "nonrepeating"
KINDS = (PLAIN, ALTERNATING, NONREPEATING)
ALT = "alt"
NR_AGENT_BOUND = 4

Index = Hashable
Pair = tuple[str, str]


class BisimError(ValueError):
    pass


def index_name(i: Index) -> str:
    if isinstance(i, frozenset):
        return "{" + ",".join(sorted(i)) + "}"
    return str(i)


def indices(kind: str, agents: Iterable[str]) -> list[Index]:
    agents = sorted(agents)
    if kind == PLAIN:
        return [PLAIN]
    if kind == ALTERNATING:
        if ALT in agents:
            raise BisimError(f"agent name {ALT!r} clashes with the alternating top index")
        return agents + [ALT]
    if kind == NONREPEATING:
        return [frozenset(c) for k in range(len(agents) + 1) for c in combinations(agents, k)]
    raise BisimError(f"unknown bisimulation kind {kind!r}")


def moves(kind: str, index: Index, agents: Iterable[str]) -> list[tuple[str, Index]]:
    """The (agent, target index) pairs the Zig/Zag clauses of ``index`` range over."""
    agents = sorted(agents)
    if kind == PLAIN:
        return [(b, PLAIN) for b in agents]
    if kind == ALTERNATING:
        return [(b, b) for b in agents if b != index]
    if kind == NONREPEATING:
        return [(x, index - {x}) for x in sorted(index)]
    raise BisimError(f"unknown bisimulation kind {kind!r}")


def top_index(kind: str, agents: Iterable[str]) -> Index:
    return {PLAIN: PLAIN, ALTERNATING: ALT}.get(kind) or frozenset(agents)


@dataclass(frozen=True)
class BisimFamily:
    kind: str
    agents: tuple[str, ...]
    relations: Mapping[Index, frozenset]
    depth: int | None = None  # None stands for the infinite depth
    layers: tuple = field(default=(), compare=False, repr=False)

    def pairs(self, index: Index | None = None) -> frozenset:
        if index is None:
            index = top_index(self.kind, self.agents)
        return self.relations.get(index, frozenset())

    def related(self, u: str, v: str, index: Index | None = None) -> bool:
        return (u, v) in self.pairs(index)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "depth": "omega" if self.depth is None else self.depth,
            "relations": {index_name(i): sorted([u, v] for u, v in rel)
                          for i, rel in sorted(self.relations.items(), key=lambda kv: index_name(kv[0]))},
        }


@dataclass(frozen=True)
class Verdict:
    ok: bool
    index: Index | None = None
    pair: Pair | None = None
    clause: str | None = None

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        if self.ok:
            return {"ok": True}
        return {"ok": False, "index": index_name(self.index), "pair": list(self.pair),
                "clause": self.clause}


def _check_universe(m: KripkeModel, n: KripkeModel, kind: str) -> tuple[str, ...]:
    if set(m.agents) != set(n.agents):
        raise BisimError(f"agent universes differ: {sorted(m.agents)} vs {sorted(n.agents)}")
    if kind == NONREPEATING and len(m.agents) > NR_AGENT_BOUND:
        raise BisimError(f"nonrepeating families need at most {NR_AGENT_BOUND} agents")
    if kind not in KINDS:
        raise BisimError(f"unknown bisimulation kind {kind!r}")
    return tuple(sorted(m.agents))


def atom_pairs(m: KripkeModel, n: KripkeModel) -> frozenset:
    labels = {v: n.label(v) for v in n.worlds}
    return frozenset((u, v) for u in m.worlds for v in n.worlds if m.label(u) == labels[v])


def _failed_clause(m, n, u, v, mv, rel) -> str | None:
    for b, j in mv:
        target = rel.get(j, frozenset())
        nb = n.succ[b][v]
        for x in m.succ[b][u]:
            if not any((x, y) in target for y in nb):
                return f"zig:{b}"
        mb = m.succ[b][u]
        for y in nb:
            if not any((x, y) in target for x in mb):
                return f"zag:{b}"
    return None


def violations(m: KripkeModel, n: KripkeModel, kind: str,
               relations: Mapping[Index, Iterable[Pair]],
               target: Mapping[Index, Iterable[Pair]] | None = None) -> list[tuple[Index, Pair, str]]:
    """All (index, pair, clause) where a pair of ``relations`` breaks a clause.

    Zig/Zag are checked into ``target`` (default: ``relations`` itself).
    """
    agents = _check_universe(m, n, kind)
    rel = {i: frozenset(r) for i, r in relations.items()}
    tgt = rel if target is None else {i: frozenset(r) for i, r in target.items()}
    out = []
    for i in indices(kind, agents):
        mv = moves(kind, i, agents)
        for u, v in sorted(rel.get(i, ())):
            if m.label(u) != n.label(v):
                out.append((i, (u, v), "atom"))
                continue
            clause = _failed_clause(m, n, u, v, mv, tgt)
            if clause:
                out.append((i, (u, v), clause))
    return out


def _round(m, n, kind, agents, rel):
    new = {}
    for i in indices(kind, agents):
        mv = moves(kind, i, agents)
        new[i] = frozenset(p for p in rel[i] if _failed_clause(m, n, p[0], p[1], mv, rel) is None)
    return new


def _sparse(kind, rel):
    if kind == NONREPEATING:
        return {i: r for i, r in rel.items() if r}
    return dict(rel)


def bounded_family(m: KripkeModel, n: KripkeModel, kind: str, depth: int) -> BisimFamily:
    """The depth-``depth`` relations, built by the inductive definition."""
    if depth < 0:
        raise BisimError("depth must be a natural number")
    agents = _check_universe(m, n, kind)
    base = atom_pairs(m, n)
    rel = {i: base for i in indices(kind, agents)}
    layers = [rel]
    for _ in range(depth):
        rel = _round(m, n, kind, agents, rel)
        layers.append(rel)
    return BisimFamily(kind, agents, _sparse(kind, rel), depth,
                       tuple(_sparse(kind, layer) for layer in layers))


def greatest_family(m: KripkeModel, n: KripkeModel, kind: str) -> BisimFamily:
    agents = _check_universe(m, n, kind)
    base = atom_pairs(m, n)
    rel = {i: base for i in indices(kind, agents)}
    while True:
        new = _round(m, n, kind, agents, rel)
        if new == rel:
            break
        rel = new
    fam = BisimFamily(kind, agents, _sparse(kind, rel), None)
    verdict = verify_family(m, n, fam)
    assert verdict.ok, f"fixpoint failed its own verification: {verdict}"
    return fam


def verify_family(m: KripkeModel, n: KripkeModel, fam: BisimFamily) -> Verdict:
    """Check every clause for every recorded pair.

    An infinite-depth family must be a post-fixed point. A layered family
    (``fam.layers``) must have atom-agreeing pairs at layer 0 and, at each
    later layer, pairs whose moves are matched inside the previous layer.
    """
    _check_universe(m, n, fam.kind)
    if set(fam.agents) != set(m.agents):
        raise BisimError("family agents differ from the model agents")
    allowed = set(indices(fam.kind, fam.agents))
    for i in fam.relations:
        if i not in allowed:
            return Verdict(False, i, None, "index")
    if fam.depth is None or not fam.layers:
        found = violations(m, n, fam.kind, fam.relations)
        if found:
            return Verdict(False, *found[0])
        return Verdict(True)
    atom = violations(m, n, fam.kind, fam.layers[0], {})
    atom = [v for v in atom if v[2] == "atom"]
    if atom:
        return Verdict(False, *atom[0])
    for prev, cur in zip(fam.layers, fam.layers[1:]):
        found = violations(m, n, fam.kind, cur, prev)
        if found:
            return Verdict(False, *found[0])
    return Verdict(True)


# --- n-types: an independent route to bounded bisimilarity -------------------------------

class TypeTable:
    """Hash-consed modal n-types.

    Two pointed finite models have equal plain (resp. alternating) n-type ids
    iff they are n-bisimilar (resp. related at ``alt`` at depth n). Ids are
    shared across every model fed to the same table.
    """

    def __init__(self):
        self._ids: dict = {}

    def _intern(self, key) -> int:
        return self._ids.setdefault(key, len(self._ids))

    def plain(self, m: KripkeModel, depth: int) -> dict[str, int]:
        agents = sorted(m.agents)
        cur = {w: self._intern(("v", tuple(sorted(m.label(w))))) for w in m.worlds}
        for _ in range(depth):
            cur = {w: self._intern(("p", _label_key(m, w), tuple(
                frozenset(cur[x] for x in m.succ[b][w]) for b in agents)))
                for w in m.worlds}
        return cur

    def alternating(self, m: KripkeModel, depth: int) -> dict[str, int]:
        agents = sorted(m.agents)
        val = {w: self._intern(("v", tuple(sorted(m.label(w))))) for w in m.worlds}
        if depth == 0:
            return val
        minus = {a: dict(val) for a in agents}
        for _ in range(depth - 1):
            minus = {a: {w: self._intern(("m", a, val[w], tuple(
                frozenset(minus[b][x] for x in m.succ[b][w]) for b in agents if b != a)))
                for w in m.worlds} for a in agents}
        return {w: self._intern(("alt", val[w], tuple(
            frozenset(minus[b][x] for x in m.succ[b][w]) for b in agents)))
            for w in m.worlds}


def _label_key(m: KripkeModel, w: str) -> tuple:
    return tuple(sorted(m.label(w)))
