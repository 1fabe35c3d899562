"""Bounded countermodel search over a frame class.

Exhaustive mode enumerates every frame of the class with 1..max_worlds worlds
(smallest first), every valuation of the formula's atoms and every world, and
returns the first refutation in that order. Frames, valuations and worlds are
evaluated in numpy batches. Agents that do not occur in a C/E-free formula
cannot affect its truth, so they are pinned to the first frame of the class.
"""
from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ..formula import And, Atom, Box, C, E, Formula, Not, agents as formula_agents, atoms, has_common, normalize
from ..kripke import FrameClass, KripkeModel, PointedModel, model_check, relation_properties
from ..generate import close_relation

MAX_WORLDS = 3
MAX_AGENTS = 2
MAX_ATOMS = 2
CHUNK = 64  # frames of the first free agent evaluated per batch


class SearchGuardError(ValueError):
    pass


def _worlds(n: int) -> list[str]:
    return [f"w{i}" for i in range(n)]


@lru_cache(maxsize=None)
def class_frames(n: int, properties: frozenset) -> np.ndarray:
    """All n-world relations with the given properties, as a (K, n, n) bool array
    in increasing bitmask order."""
    ws = _worlds(n)
    cells = [(i, j) for i in range(n) for j in range(n)]
    keep = []
    for mask in range(1 << len(cells)):
        pairs = [(ws[i], ws[j]) for k, (i, j) in enumerate(cells) if mask >> k & 1]
        props = relation_properties(ws, pairs)
        if all(props[p] for p in properties):
            mat = np.zeros((n, n), dtype=bool)
            for k, (i, j) in enumerate(cells):
                mat[i, j] = bool(mask >> k & 1)
            keep.append(mat)
    if not keep:
        return np.zeros((0, n, n), dtype=bool)
    out = np.stack(keep)
    out.setflags(write=False)
    return out


def _universe(f: Formula, agents: Sequence[str] | None) -> tuple[str, ...]:
    if agents is not None:
        return tuple(agents)
    found = sorted(formula_agents(f))
    for pad in ("a", "b"):
        if len(found) >= 2:
            break
        if pad not in found:
            found.append(pad)
    return tuple(found)


class _Batch:
    """Truth values of subformulas over a batch, shaped (c0, c1, V, n)."""

    def __init__(self, rels: dict[str, np.ndarray], vals: dict[str, np.ndarray], n: int):
        self.rels = rels  # agent -> (c0|1, c1|1, 1, n, n)
        self.vals = vals  # atom -> (1, 1, V, n)
        self.n = n
        self.cache: dict[Formula, np.ndarray] = {}
        self._union = None
        self._reach = None

    def union(self) -> np.ndarray:
        if self._union is None:
            u = None
            for r in self.rels.values():
                u = r if u is None else (u | r)
            self._union = u
        return self._union

    def reach(self) -> np.ndarray:
        """Reachability in one or more union steps."""
        if self._reach is None:
            u = self.union()
            r = u.copy()
            for _ in range(self.n):
                step = (r[..., :, :, None] & u[..., None, :, :]).any(axis=-2)
                nxt = r | step
                if np.array_equal(nxt, r):
                    break
                r = nxt
            self._reach = r
        return self._reach

    @staticmethod
    def _box(rel: np.ndarray, inner: np.ndarray) -> np.ndarray:
        # world w satisfies the box iff no successor v falsifies inner
        bad = rel & ~inner[..., None, :]
        return ~bad.any(axis=-1)

    def ext(self, f: Formula) -> np.ndarray:
        hit = self.cache.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            out = self.vals[f.name]
        elif isinstance(f, Not):
            out = ~self.ext(f.arg)
        elif isinstance(f, And):
            out = self.ext(f.left) & self.ext(f.right)
        elif isinstance(f, Box):
            out = self._box(self.rels[f.agent], self.ext(f.arg))
        elif isinstance(f, E):
            out = self._box(self.union(), self.ext(f.arg))
        elif isinstance(f, C):
            out = self._box(self.reach(), self.ext(f.arg))
        else:
            raise TypeError(f"not a core formula: {f!r}")
        self.cache[f] = out
        return out


def _valuations(n: int, names: Sequence[str]) -> dict[str, np.ndarray]:
    bits = len(names) * n
    codes = np.arange(1 << bits)
    out = {}
    for k, p in enumerate(names):
        cols = [(codes >> (k * n + i)) & 1 for i in range(n)]
        out[p] = np.stack(cols, axis=-1).astype(bool)[None, None, :, :]
    return out


def _build(n, agents, frames, choice, names, vals_index, world) -> PointedModel:
    ws = _worlds(n)
    rel = {}
    for a in agents:
        mat = frames[a][choice[a]]
        rel[a] = [(ws[i], ws[j]) for i in range(n) for j in range(n) if mat[i, j]]
    val = {}
    for k, p in enumerate(names):
        val[p] = [ws[i] for i in range(n) if vals_index >> (k * n + i) & 1]
    return PointedModel(KripkeModel(ws, agents, rel, val), ws[world])


def _verified(pm: PointedModel, f: Formula, fc: FrameClass) -> PointedModel:
    if not fc.contains(pm.model) or model_check(pm, f):
        raise RuntimeError("countermodel failed re-verification; the batch evaluator is inconsistent")
    return pm


def exhaustive_search(f: Formula, fc: FrameClass, max_worlds: int,
                      agents: Sequence[str] | None = None) -> PointedModel | None:
    g = normalize(f)
    universe = _universe(g, agents)
    names = sorted(atoms(g))
    free = [a for a in universe if has_common(g) or a in formula_agents(g)]
    if max_worlds > MAX_WORLDS or len(free) > MAX_AGENTS or len(names) > MAX_ATOMS:
        raise SearchGuardError(
            f"exhaustive search is limited to {MAX_WORLDS} worlds, {MAX_AGENTS} varying agents "
            f"and {MAX_ATOMS} atoms (got {max_worlds}, {len(free)}, {len(names)})")
    for n in range(1, max_worlds + 1):
        base = class_frames(n, fc.properties)
        if not len(base):
            continue
        frames = {a: base if a in free else base[:1] for a in universe}
        vals = _valuations(n, names)
        first = free[0] if free else None
        second = free[1] if len(free) > 1 else None
        k0 = len(frames[first]) if first else 1
        for start in range(0, k0, CHUNK):
            stop = min(start + CHUNK, k0)
            rels = {}
            for a in universe:
                if a == first:
                    rels[a] = frames[a][start:stop][:, None, None]
                else:  # the second free agent, or a pinned one with a single frame
                    rels[a] = frames[a][None, :, None]
            batch = _Batch(rels, vals, n)
            truth = np.broadcast_to(batch.ext(g), (stop - start, len(frames[second]) if second else 1,
                                                   1 << (len(names) * n), n))
            hits = np.argwhere(~truth)
            if len(hits):
                i0, i1, v, w = (int(x) for x in hits[0])
                choice = {a: 0 for a in universe}
                if first:
                    choice[first] = start + i0
                if second:
                    choice[second] = i1
                return _verified(_build(n, universe, frames, choice, names, v, w), f, fc)
    return None


def random_search(f: Formula, fc: FrameClass, max_worlds: int, seed: int, trials: int = 1000,
                  agents: Sequence[str] | None = None, edge_prob: float = 0.35) -> PointedModel | None:
    g = normalize(f)
    universe = _universe(g, agents)
    names = sorted(atoms(g)) or ["p"]
    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(1, max_worlds)
        ws = _worlds(n)
        rel = {a: close_relation(rng, ws, {(u, v) for u in ws for v in ws if rng.random() < edge_prob},
                                 fc.properties) for a in universe}
        val = {p: [w for w in ws if rng.random() < 0.5] for p in names}
        m = KripkeModel(ws, universe, rel, val)
        if not fc.contains(m):
            continue
        for w in ws:
            pm = PointedModel(m, w)
            if not model_check(pm, f):
                return _verified(pm, f, fc)
    return None


def search_countermodel(f: Formula, fc: FrameClass | str, max_worlds: int, mode: str = "exhaustive",
                        seed: int = 1729, trials: int = 1000,
                        agents: Iterable[str] | None = None) -> PointedModel | None:
    """A pointed model in ``fc`` refuting ``f``, or None if the search finds none."""
    if isinstance(fc, str):
        fc = FrameClass.named(fc)
    agents = tuple(agents) if agents is not None else None
    if mode == "exhaustive":
        return exhaustive_search(f, fc, max_worlds, agents)
    if mode == "random":
        return random_search(f, fc, max_worlds, seed, trials, agents)
    raise ValueError(f"unknown search mode {mode!r}")
