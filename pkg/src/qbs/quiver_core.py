"""Quiver settings, the Euler form and the graph algorithms the rest of qbs uses.

Vertices and arrows keep the order in which they were given; that order is
the canonical order for every matrix, dimension vector tuple and report.
"""
from __future__ import annotations

import os
from collections import deque
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .errors import (
    BudgetExceeded,
    DanglingArrow,
    DimensionVectorMismatch,
    DisconnectedQuiver,
    DuplicateVertexId,
    EmptyQuiver,
    InvalidSetting,
    NegativeDimension,
)

Vertex = Hashable
Arrow = tuple  # (tail, head)
DimensionVector = Mapping

DEFAULT_NODE_LIMIT = 10**6


def node_limit(limit: int | None = None) -> int:
    """Resolve an enumeration budget: explicit value, then ``QBS_BUDGET``, then the default."""
    if limit is not None:
        return int(limit)
    env = os.environ.get("QBS_BUDGET")
    if env:
        return int(env)
    return DEFAULT_NODE_LIMIT


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple((t, h) for t, h in self.arrows))
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise DuplicateVertexId(f"vertex {v!r} listed twice")
            seen.add(v)
        for i, (t, h) in enumerate(self.arrows):
            for end in (t, h):
                if end not in seen:
                    raise DanglingArrow(f"arrow {i} ({t!r} -> {h!r}) ends at unknown vertex {end!r}")

    @cached_property
    def _index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def index(self, v) -> int:
        return self._index[v]

    def __contains__(self, v) -> bool:
        return v in self._index

    @cached_property
    def _out(self) -> dict:
        out = {v: [] for v in self.vertices}
        for i, (t, _) in enumerate(self.arrows):
            out[t].append(i)
        return out

    @cached_property
    def _in(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for i, (_, h) in enumerate(self.arrows):
            inc[h].append(i)
        return inc

    def out_arrows(self, v) -> list[int]:
        return self._out[v]

    def in_arrows(self, v) -> list[int]:
        return self._in[v]

    def loops(self, v) -> int:
        return sum(1 for i in self._out[v] if self.arrows[i][1] == v)

    def successors(self, v) -> list:
        return [self.arrows[i][1] for i in self._out[v]]

    def predecessors(self, v) -> list:
        return [self.arrows[i][0] for i in self._in[v]]

    def induced(self, vertices: Iterable) -> "Quiver":
        keep = set(vertices)
        return Quiver(
            tuple(v for v in self.vertices if v in keep),
            tuple(a for a in self.arrows if a[0] in keep and a[1] in keep),
        )

    def relabel(self, mapping: Mapping) -> "Quiver":
        return Quiver(tuple(mapping[v] for v in self.vertices),
                      tuple((mapping[t], mapping[h]) for t, h in self.arrows))


@dataclass(frozen=True)
class QuiverSetting:
    quiver: Quiver
    dims: tuple

    def __post_init__(self):
        dims = self.dims
        if isinstance(dims, Mapping):
            dims = as_vector(self.quiver, dims)
        dims = tuple(int(d) for d in dims)
        if len(dims) != len(self.quiver.vertices):
            raise DimensionVectorMismatch(
                f"{len(dims)} dimensions for {len(self.quiver.vertices)} vertices")
        for v, d in zip(self.quiver.vertices, dims):
            if d < 0:
                raise NegativeDimension(f"vertex {v!r} has dimension {d}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def build(cls, dims: Mapping, arrows: Iterable = ()) -> "QuiverSetting":
        """Shorthand: ``QuiverSetting.build({"a": 1, "b": 1}, [("a", "b"), ("b", "a")])``."""
        return cls(Quiver(tuple(dims), tuple(arrows)), tuple(dims.values()))

    @property
    def vertices(self) -> tuple:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple:
        return self.quiver.arrows

    @property
    def alpha(self) -> dict:
        return dict(zip(self.quiver.vertices, self.dims))

    def dim(self, v) -> int:
        return self.dims[self.quiver.index(v)]

    def support(self) -> "QuiverSetting":
        """Drop vertices of dimension 0 together with their arrows."""
        return self.restrict(v for v, d in zip(self.vertices, self.dims) if d > 0)

    def restrict(self, vertices: Iterable) -> "QuiverSetting":
        q = self.quiver.induced(vertices)
        return QuiverSetting(q, tuple(self.dim(v) for v in q.vertices))

    def with_dims(self, dims) -> "QuiverSetting":
        return QuiverSetting(self.quiver, dims)


def as_vector(Q: Quiver, x) -> tuple:
    """Coerce a dimension vector (mapping or sequence) to a tuple in canonical vertex order."""
    if isinstance(x, QuiverSetting):
        x = x.dims
    if isinstance(x, Mapping):
        if set(x) != set(Q.vertices):
            raise DimensionVectorMismatch(
                f"dimension vector keys {sorted(map(str, x))} do not match the vertices")
        return tuple(int(x[v]) for v in Q.vertices)
    x = tuple(int(e) for e in x)
    if len(x) != len(Q.vertices):
        raise DimensionVectorMismatch(f"expected {len(Q.vertices)} entries, got {len(x)}")
    return x


def unit(Q: Quiver, v) -> tuple:
    return tuple(1 if w == v else 0 for w in Q.vertices)


def validate(raw: Mapping) -> QuiverSetting:
    """Build a canonical :class:`QuiverSetting` from the JSON-style description.

    ``raw`` looks like ``{"vertices": [{"id": "a", "dim": 1}], "arrows": [["a", "a"]]}``;
    vertices may also carry a ``gamma`` entry, which is ignored here (see
    :func:`parse_gamma`).
    """
    if not isinstance(raw, Mapping):
        raise InvalidSetting("quiver description must be an object")
    verts = raw.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise InvalidSetting("'vertices' must be a non-empty list")
    ids, dims = [], []
    for entry in verts:
        if not isinstance(entry, Mapping) or "id" not in entry:
            raise InvalidSetting(f"bad vertex entry {entry!r}")
        vid = entry["id"]
        if not isinstance(vid, str):
            raise InvalidSetting(f"vertex id {vid!r} is not a string")
        d = entry.get("dim", 1)
        if isinstance(d, bool) or not isinstance(d, int):
            raise InvalidSetting(f"dimension of {vid!r} is not an integer")
        if d < 0:
            raise NegativeDimension(f"vertex {vid!r} has dimension {d}")
        ids.append(vid)
        dims.append(d)
    arrows = raw.get("arrows", [])
    if not isinstance(arrows, list):
        raise InvalidSetting("'arrows' must be a list")
    parsed = []
    for a in arrows:
        if not isinstance(a, (list, tuple)) or len(a) != 2:
            raise InvalidSetting(f"arrow {a!r} is not a [tail, head] pair")
        parsed.append((a[0], a[1]))
    return QuiverSetting(Quiver(tuple(ids), tuple(parsed)), tuple(dims))


def parse_gamma(raw: Mapping) -> dict | None:
    """Per-vertex ``gamma`` values from a JSON description, or None when absent everywhere."""
    entries = raw.get("vertices", [])
    if not any(isinstance(e, Mapping) and "gamma" in e for e in entries):
        return None
    gamma = {}
    for e in entries:
        g = e.get("gamma", 0)
        if isinstance(g, bool) or not isinstance(g, int) or g < 0:
            raise InvalidSetting(f"gamma of {e.get('id')!r} must be a non-negative integer")
        gamma[e["id"]] = g
    return gamma


def euler_matrix(Q: Quiver) -> list[list[int]]:
    n = len(Q.vertices)
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for t, h in Q.arrows:
        m[Q.index(t)][Q.index(h)] -= 1
    return m


def chi(Q: Quiver, alpha, beta) -> int:
    """Euler form ``alpha^T . EulerMatrix . beta``."""
    if isinstance(Q, QuiverSetting):
        Q = Q.quiver
    a = as_vector(Q, alpha)
    b = as_vector(Q, beta)
    val = sum(x * y for x, y in zip(a, b))
    for t, h in Q.arrows:
        val -= a[Q.index(t)] * b[Q.index(h)]
    return val


def _reach(Q: Quiver, start, forward: bool = True) -> set:
    seen = {start}
    todo = deque([start])
    step = Q.successors if forward else Q.predecessors
    while todo:
        v = todo.popleft()
        for w in step(v):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def reachable(Q: Quiver, start) -> set:
    return _reach(Q, start, True)


def is_strongly_connected(Q: Quiver) -> bool:
    if isinstance(Q, QuiverSetting):
        Q = Q.quiver
    if not Q.vertices:
        raise EmptyQuiver("strong connectivity of the empty quiver is undefined")
    v = Q.vertices[0]
    n = len(Q.vertices)
    return len(_reach(Q, v, True)) == n and len(_reach(Q, v, False)) == n


def is_connected(Q: Quiver) -> bool:
    if not Q.vertices:
        return False
    seen = {Q.vertices[0]}
    todo = [Q.vertices[0]]
    while todo:
        v = todo.pop()
        for w in Q.successors(v) + Q.predecessors(v):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(Q.vertices)


def _edge_blocks(Q: Quiver) -> list[tuple[set, list[int]]]:
    """Blocks of the underlying multigraph as (vertex set, arrow indices).

    Every loop is its own block; parallel arrows always share a block.
    """
    g = nx.Graph()
    g.add_nodes_from(Q.vertices)
    by_pair: dict[frozenset, list[int]] = {}
    blocks = []
    for i, (t, h) in enumerate(Q.arrows):
        if t == h:
            blocks.append(({t}, [i]))
        else:
            by_pair.setdefault(frozenset((t, h)), []).append(i)
            g.add_edge(t, h)
    for edges in nx.biconnected_component_edges(g):
        verts, idx = set(), []
        for u, w in edges:
            verts.update((u, w))
            idx.extend(by_pair[frozenset((u, w))])
        blocks.append((verts, sorted(idx)))
    covered = set().union(*(b[0] for b in blocks)) if blocks else set()
    for v in Q.vertices:
        if v not in covered:
            blocks.append(({v}, []))
    return blocks


def prime_components(S: QuiverSetting) -> list[QuiverSetting]:
    """Split ``S`` at dimension-1 vertices into its maximal prime subsettings.

    Blocks of the underlying graph meeting in a vertex of dimension other
    than 1 cannot be separated and are merged.  Shared dimension-1 vertices
    appear in every component that touches them.
    """
    Q = S.quiver
    if not is_connected(Q):
        raise DisconnectedQuiver("prime components need a connected quiver")
    blocks = _edge_blocks(Q)
    parent = list(range(len(blocks)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict = {}
    for bi, (verts, _) in enumerate(blocks):
        for v in verts:
            if S.dim(v) == 1:
                continue
            if v in owner:
                parent[find(bi)] = find(owner[v])
            else:
                owner[v] = bi
    groups: dict[int, tuple[set, list[int]]] = {}
    for bi, (verts, idx) in enumerate(blocks):
        g = groups.setdefault(find(bi), (set(), []))
        g[0].update(verts)
        g[1].extend(idx)
    comps = []
    for verts, idx in groups.values():
        idx = sorted(idx)
        q = Quiver(tuple(v for v in Q.vertices if v in verts), tuple(Q.arrows[i] for i in idx))
        comps.append((idx[0] if idx else len(Q.arrows) + Q.index(q.vertices[0]),
                      QuiverSetting(q, tuple(S.dim(v) for v in q.vertices))))
    comps.sort(key=lambda c: c[0])
    return [c for _, c in comps]


def _min_rotation(cycle: Sequence[int], starts: list[int]) -> tuple:
    return min(tuple(cycle[i:]) + tuple(cycle[:i]) for i in starts)


def quasiprimitive_cycles_through(S: QuiverSetting, v, limit: int | None = None) -> list[tuple]:
    """Oriented cycles based at ``v`` that respect the visit budget ``alpha(w)``.

    A cycle is a closed arrow sequence leaving and re-entering ``v``; each
    vertex ``w`` may occur as a tail at most ``alpha(w)`` times (the base
    vertex counts once for the closing pair).  Cycles are returned once per
    rotation class, as the lexicographically least rotation starting at ``v``.
    """
    Q = S.quiver
    budget = node_limit(limit)
    alpha = S.alpha
    if alpha[v] < 1:
        return []
    used = {w: 0 for w in Q.vertices}
    used[v] = 1
    path: list[int] = []
    found: set = set()
    expansions = 0

    def dfs(x):
        nonlocal expansions
        for ai in Q.out_arrows(x):
            expansions += 1
            if expansions > budget:
                raise BudgetExceeded(f"cycle enumeration exceeded {budget} expansions",
                                     partial=len(found))
            y = Q.arrows[ai][1]
            path.append(ai)
            if y == v:
                starts = [i for i, a in enumerate(path) if Q.arrows[a][0] == v]
                found.add(_min_rotation(path, starts))
            if used[y] < alpha[y]:
                used[y] += 1
                dfs(y)
                used[y] -= 1
            path.pop()

    dfs(v)
    return sorted(found)


def count_quasiprimitive_cycles_through(S: QuiverSetting, v, limit: int | None = None) -> int:
    return len(quasiprimitive_cycles_through(S, v, limit))
