"""Transition graphs and elimination-scheme construction.

A :class:`TransitionGraph` records which level pairs admit a drive pulse. The
scheme builder repeatedly removes a level whose deletion keeps the remaining
levels connected, layers the rest by BFS distance from it, and pairs every
level with a pivot one layer closer to the removed level.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    DisconnectedGraphError,
    InvalidDimensionError,
    InvalidInputError,
    LevelIndexError,
    SpecParseError,
)


def _edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


class TransitionGraph:
    """Undirected graph on levels ``0..dim-1`` with optional edge weights.

    Weights are a noise heuristic used only to break ties between candidate
    pivots (lower is preferred); unweighted edges count as ``1.0``.
    """

    def __init__(self, dim: int, edges: Iterable, weights: Optional[Mapping] = None):
        dim = int(dim)
        if dim < 1:
            raise InvalidDimensionError(f"graph needs at least one level, got {dim}")
        norm = set()
        for e in edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise InvalidInputError(f"self-loop on level {i}")
            if not (0 <= i < dim and 0 <= j < dim):
                raise LevelIndexError(f"edge ({i}, {j}) out of range for dim {dim}")
            norm.add(_edge(i, j))
        self.dim = dim
        self.edges = frozenset(norm)
        self.weights = {}
        for key, w in (weights or {}).items():
            i, j = _parse_weight_key(key) if isinstance(key, str) else key
            e = _edge(int(i), int(j))
            if e not in self.edges:
                raise InvalidInputError(f"weight given for non-edge {e}")
            if not float(w) > 0:
                raise InvalidInputError(f"edge weight must be positive, got {w} on {e}")
            self.weights[e] = float(w)
        adj = [[] for _ in range(dim)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        self.adj = tuple(tuple(sorted(a)) for a in adj)

    def __repr__(self):
        return f"TransitionGraph(dim={self.dim}, edges={sorted(self.edges)})"

    def __eq__(self, other):
        if not isinstance(other, TransitionGraph):
            return NotImplemented
        return (self.dim, self.edges, self.weights) == (other.dim, other.edges, other.weights)

    def __hash__(self):
        return hash((self.dim, self.edges))

    def has_edge(self, i: int, j: int) -> bool:
        return _edge(i, j) in self.edges

    def weight(self, i: int, j: int) -> float:
        return self.weights.get(_edge(i, j), 1.0)

    def is_connected(self, active: Optional[Iterable[int]] = None) -> bool:
        nodes = set(range(self.dim)) if active is None else set(active)
        if not nodes:
            return True
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self.adj[v]:
                if w in nodes and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(nodes)

    def require_connected(self, active: Optional[Iterable[int]] = None) -> None:
        if not self.is_connected(active):
            what = "transition graph" if active is None else f"level set {sorted(active)}"
            raise DisconnectedGraphError(f"{what} is not connected")

    def to_dict(self) -> dict:
        data = {"dim": self.dim, "edges": [list(e) for e in sorted(self.edges)]}
        if self.weights:
            data["weights"] = {f"{i}-{j}": w for (i, j), w in sorted(self.weights.items())}
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> "TransitionGraph":
        try:
            return cls(int(data["dim"]), data["edges"], data.get("weights"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (InvalidInputError, LevelIndexError, InvalidDimensionError)):
                raise
            raise SpecParseError(f"malformed graph JSON: {exc}") from exc


def _parse_weight_key(key: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*-\s*(\d+)\s*", key)
    if not m:
        raise SpecParseError(f"bad weight key {key!r}; expected 'i-j'")
    return int(m.group(1)), int(m.group(2))


def load_graph(path) -> TransitionGraph:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"{path}: invalid JSON ({exc})") from exc
    return TransitionGraph.from_dict(data)


def line_graph(d: int) -> TransitionGraph:
    return TransitionGraph(d, [(n, n + 1) for n in range(d - 1)])


def star_graph(d: int) -> TransitionGraph:
    return TransitionGraph(d, [(0, n) for n in range(1, d)])


def bipartite_graph(d: int, p: int) -> TransitionGraph:
    if not 1 <= p < d:
        raise SpecParseError(f"bipartite partition p={p} must satisfy 1 <= p < d={d}")
    return TransitionGraph(d, [(a, b) for a in range(p) for b in range(p, d)])


def complete_graph(d: int) -> TransitionGraph:
    return TransitionGraph(d, [(i, j) for i in range(d) for j in range(i + 1, d)])


_PRESET_RE = re.compile(r"^(line|star|bipartite|complete):(\d+)(?::(\d+))?$")


def preset_graph(spec: str) -> TransitionGraph:
    """Parse ``line:<d>``, ``star:<d>``, ``bipartite:<d>:<p>`` or ``complete:<d>``."""
    m = _PRESET_RE.match(spec.strip().lower())
    if not m:
        raise SpecParseError(f"unrecognised graph spec {spec!r}")
    kind, d, p = m.group(1), int(m.group(2)), m.group(3)
    if d < 1:
        raise SpecParseError(f"graph dimension must be >= 1 in {spec!r}")
    if kind == "bipartite":
        if p is None:
            raise SpecParseError(f"bipartite spec needs a partition size: {spec!r}")
        return bipartite_graph(d, int(p))
    if p is not None:
        raise SpecParseError(f"{kind} takes no partition size: {spec!r}")
    return {"line": line_graph, "star": star_graph, "complete": complete_graph}[kind](d)


def random_connected_graph(d: int, rng=None, extra_edge_prob: float = 0.3) -> TransitionGraph:
    """Random spanning tree plus independently sampled extra edges."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    order = rng.permutation(d)
    edges = set()
    for n in range(1, d):
        parent = order[rng.integers(n)]
        edges.add(_edge(int(order[n]), int(parent)))
    for i in range(d):
        for j in range(i + 1, d):
            if rng.random() < extra_edge_prob:
                edges.add((i, j))
    return TransitionGraph(d, edges)


# --------------------------------------------------------------------------
# graph primitives on induced subgraphs


def _active_set(g: TransitionGraph, active) -> set:
    nodes = set(range(g.dim)) if active is None else {int(a) for a in active}
    for a in nodes:
        if not 0 <= a < g.dim:
            raise LevelIndexError(f"level {a} out of range for dim {g.dim}")
    return nodes


def articulation_points(g: TransitionGraph, active=None) -> set:
    """Cut vertices of the subgraph induced by ``active`` (iterative Tarjan)."""
    nodes = _active_set(g, active)
    disc = {}
    low = {}
    cut = set()
    timer = 0
    for root in sorted(nodes):
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, iter(g.adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w not in nodes:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(g.adj[w])))
                    advanced = True
                    break
                if w != parent:
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent == -1:
                continue
            low[parent] = min(low[parent], low[v])
            if parent == root:
                root_children += 1
            elif low[v] >= disc[parent]:
                cut.add(parent)
        if root_children > 1:
            cut.add(root)
    return cut


def removable_levels(g: TransitionGraph, active=None) -> frozenset:
    """Levels of ``active`` whose removal leaves the rest connected."""
    nodes = _active_set(g, active)
    if len(nodes) < 2:
        raise InvalidInputError("need at least two active levels")
    g.require_connected(nodes)
    return frozenset(nodes - articulation_points(g, nodes))


def bfs_layers(g: TransitionGraph, active, root: int) -> list[list[int]]:
    """Split ``active`` into layers by shortest-path distance from ``root``."""
    nodes = _active_set(g, active)
    if root not in nodes:
        raise InvalidInputError(f"root {root} is not an active level")
    dist = {root: 0}
    layers = [[root]]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in g.adj[v]:
            if w in nodes and w not in dist:
                dist[w] = dist[v] + 1
                if dist[w] == len(layers):
                    layers.append([])
                layers[dist[w]].append(w)
                queue.append(w)
    if len(dist) != len(nodes):
        raise DisconnectedGraphError(f"level set {sorted(nodes)} is not connected")
    return [sorted(layer) for layer in layers]


LAYER_ORDERS = ("descending", "ascending")


def _check_layer_order(layer_order: str) -> bool:
    if layer_order not in LAYER_ORDERS:
        raise InvalidInputError(f"layer order must be one of {LAYER_ORDERS}, got {layer_order!r}")
    return layer_order == "descending"


def row_steps(g: TransitionGraph, active, row: int, layer_order: str = "descending") -> list[tuple[int, int]]:
    """(eliminate, pivot) pairs clearing ``row`` over the ``active`` levels.

    Outer layers go first; inside a layer levels are taken by index in
    ``layer_order``. A level's pivot is its neighbour in the next inner layer
    with the smallest edge weight, then the smallest index.
    """
    reverse = _check_layer_order(layer_order)
    layers = bfs_layers(g, active, row)
    steps = []
    for lvl in range(len(layers) - 1, 0, -1):
        inner = set(layers[lvl - 1])
        for z in sorted(layers[lvl], reverse=reverse):
            candidates = [p for p in g.adj[z] if p in inner]
            p = min(candidates, key=lambda q: (g.weight(z, q), q))
            steps.append((z, p))
    return steps


def prune_for_row(g: TransitionGraph, active, row: int, zero_levels) -> frozenset:
    """Drop zero-amplitude levels from ``active`` while it stays connected.

    Candidates are tried in ascending order; a level is kept when removing it
    would disconnect what remains.
    """
    nodes = _active_set(g, active)
    if row not in nodes:
        raise InvalidInputError(f"row {row} is not an active level")
    g.require_connected(nodes)
    for z in sorted(int(z) for z in zero_levels):
        if z == row or z not in nodes:
            continue
        trial = nodes - {z}
        if g.is_connected(trial):
            nodes = trial
    return frozenset(nodes)


# --------------------------------------------------------------------------
# schemes


@dataclass(frozen=True)
class EliminationScheme:
    """Row order plus per-row (eliminate, pivot) steps.

    ``rows`` lists ``(row, steps)`` in elimination order; ``last`` is the level
    left over at the end, which only carries a final phase.
    """

    dim: int
    rows: tuple
    last: int

    @property
    def row_order(self) -> list[int]:
        return [r for r, _ in self.rows] + [self.last]

    @property
    def step_count(self) -> int:
        return sum(len(s) for _, s in self.rows)

    @cached_property
    def flat(self):
        """``(rows, offsets, zs, ps)`` int64 arrays for the elimination kernels."""
        rows = np.array([r for r, _ in self.rows], dtype=np.int64)
        sizes = [len(s) for _, s in self.rows]
        offsets = np.zeros(len(sizes) + 1, dtype=np.int64)
        offsets[1:] = np.cumsum(sizes)
        zs = np.array([z for _, s in self.rows for z, _ in s], dtype=np.int64)
        ps = np.array([p for _, s in self.rows for _, p in s], dtype=np.int64)
        return rows, offsets, zs, ps

    def validate(self, g: TransitionGraph) -> None:
        """Raise ``InvalidInputError`` if the scheme cannot clear every row on ``g``."""
        if g.dim != self.dim:
            raise InvalidInputError(f"scheme dim {self.dim} != graph dim {g.dim}")
        active = set(range(self.dim))
        for row, steps in self.rows:
            if row not in active:
                raise InvalidInputError(f"row {row} eliminated twice")
            zs = [z for z, _ in steps]
            if sorted(zs) != sorted(active - {row}):
                raise InvalidInputError(f"row {row}: steps do not cover the active levels")
            done = set()
            for z, p in steps:
                if not g.has_edge(z, p):
                    raise InvalidInputError(f"row {row}: ({z}, {p}) is not an allowed transition")
                if p in done or p not in active:
                    raise InvalidInputError(f"row {row}: pivot {p} already eliminated")
                done.add(z)
            active.remove(row)
        if active != {self.last}:
            raise InvalidInputError("scheme does not end on a single level")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "rows": [{"row": r, "steps": [list(s) for s in steps]} for r, steps in self.rows],
            "last": self.last,
        }

    def __str__(self):
        lines = [f"scheme for d={self.dim}, row order {self.row_order}"]
        for r, steps in self.rows:
            body = ", ".join(f"({z},{p})" for z, p in steps)
            lines.append(f"  row {r}: {body}")
        lines.append(f"  final phase on level {self.last}")
        return "\n".join(lines)


def build_static_scheme(
    g: TransitionGraph,
    row_order: Optional[Sequence[int]] = None,
    layer_order: str = "descending",
) -> EliminationScheme:
    """Elimination scheme valid for every unitary on ``g``.

    By default each step eliminates the highest-index removable level. An
    explicit ``row_order`` (first eliminated first, optionally including the
    final level) overrides that choice and is checked for validity.
    ``layer_order`` sets the index order within one BFS layer; any order
    clears the row, but it changes where cancellations land in later rows.
    """
    _check_layer_order(layer_order)
    g.require_connected()
    active = set(range(g.dim))
    order = None if row_order is None else [int(r) for r in row_order]
    if order is not None:
        if len(order) == g.dim:
            order = order[:-1]
        if len(order) != g.dim - 1 or len(set(order)) != len(order):
            raise InvalidInputError(f"row order {row_order} must list {g.dim - 1} distinct levels")
    rows = []
    for k in range(g.dim - 1):
        allowed = removable_levels(g, active)
        if order is None:
            row = max(allowed)
        else:
            row = order[k]
            if row not in allowed:
                raise InvalidInputError(f"level {row} cannot be removed at step {k}; options {sorted(allowed)}")
        rows.append((row, tuple(row_steps(g, active, row, layer_order))))
        active.remove(row)
    return EliminationScheme(g.dim, tuple(rows), next(iter(active)))
