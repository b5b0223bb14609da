"""Nullcone components of cycle sums and the fibered-product description of the fiber.

Every component of the nullcone of a connected sum of cyclic quivers with
dimension vector 1 is obtained by zeroing one arrow per cycle; what remains
is a tree.  Each sink of that tree carries a tower of projective spaces
linked by coordinate projections, and the fiber component is glued from
these towers over their shared subtrees.
"""
from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field

import networkx as nx

from .errors import NonPositiveGamma, NotARoot, UnsupportedFamily
from .flat_locus import cycle_sum_cycles
from .quiver_core import Quiver
from .rep_theory import LocalQuiverData


@dataclass(frozen=True)
class TreeComponent:
    tree: Quiver
    zeroed_arrows: tuple          # indices into the local quiver's arrow list
    kept_arrows: tuple            # local arrow index of each tree arrow
    roots: tuple
    gamma: dict = field(compare=False)
    n: int = field(compare=False)
    N: dict = field(compare=False)
    root_distance: dict = field(compare=False)   # root -> {vertex: distance}

    def subtree(self, v) -> tuple:
        return ancestors(self.tree, v)


def topological_order(T: Quiver) -> list:
    indeg = {v: len(T.in_arrows(v)) for v in T.vertices}
    ready = [v for v in T.vertices if indeg[v] == 0]
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in T.successors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    if len(order) != len(T.vertices):
        raise UnsupportedFamily("tree component has an oriented cycle")
    return order


def ancestors(T: Quiver, v) -> tuple:
    """Vertices with a path to ``v`` (including ``v``), in canonical order."""
    seen = {v}
    todo = [v]
    while todo:
        w = todo.pop()
        for u in T.predecessors(w):
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return tuple(w for w in T.vertices if w in seen)


def compute_Nw(T, gamma: Mapping, n: int | None = None) -> dict:
    """Projective dimensions ``N_w`` from ``N_w + 1 = gamma(w) + sum over incoming (N_tail + 1)``."""
    tree = T.tree if isinstance(T, TreeComponent) else T
    for v in tree.vertices:
        if gamma.get(v, 0) < 1:
            raise NonPositiveGamma(f"gamma({v!r}) = {gamma.get(v, 0)} must be positive")
    if n is not None and sum(gamma[v] for v in tree.vertices) != n:
        raise NonPositiveGamma(f"gamma sums to {sum(gamma[v] for v in tree.vertices)}, not n={n}")
    N = {}
    for w in topological_order(tree):
        N[w] = gamma[w] - 1 + sum(N[tree.arrows[a][0]] + 1 for a in tree.in_arrows(w))
    return {v: N[v] for v in tree.vertices}


def _distances(T: Quiver, root) -> dict:
    dist = {root: 0}
    todo = [root]
    while todo:
        w = todo.pop()
        for u in T.predecessors(w):
            if u not in dist:
                dist[u] = dist[w] + 1
                todo.append(u)
    return {v: dist[v] for v in T.vertices if v in dist}


def _require_cycle_sum(L: LocalQuiverData) -> list[list[int]]:
    cycles = cycle_sum_cycles(L.setting)
    if cycles is None:
        raise UnsupportedFamily("fibers are computed only for connected sums of cyclic "
                                "quivers with dimension vector 1")
    if L.gamma is None:
        raise NonPositiveGamma("local quiver data carries no gamma")
    return cycles


def nullcone_components(L: LocalQuiverData) -> list[TreeComponent]:
    cycles = _require_cycle_sum(L)
    Q = L.setting.quiver
    loops = {i for i, (t, h) in enumerate(Q.arrows) if t == h}
    comps = []
    for choice in itertools.product(*cycles):
        zero = set(choice)
        kept = tuple(i for i in range(len(Q.arrows)) if i not in zero and i not in loops)
        tree = Quiver(Q.vertices, tuple(Q.arrows[i] for i in kept))
        roots = tuple(v for v in tree.vertices if not tree.out_arrows(v))
        N = compute_Nw(tree, L.gamma, L.n)
        comps.append(TreeComponent(tree, tuple(choice), kept, roots, dict(L.gamma), L.n, N,
                                   {r: _distances(tree, r) for r in roots}))
    return comps


@dataclass(frozen=True)
class Block:
    label: str        # "free" or "arrow:<index>"
    source: object    # tail vertex of the arrow, None for the free block
    first: int        # 1-based inclusive homogeneous coordinate range
    last: int

    @property
    def size(self) -> int:
        return self.last - self.first + 1


@dataclass(frozen=True)
class GammaGraph:
    """Tower of projective spaces over a rooted subtree and the projections between them."""

    root: object
    vertices: tuple
    spaces: dict          # vertex -> N_w (the space is P^{N_w})
    distance: dict
    height: int
    blocks: dict          # vertex -> tuple of Blocks covering 1..N_w+1
    layers: tuple         # layers[i] = vertices at root distance i

    @property
    def dimension(self) -> int:
        return self.spaces[self.root]

    def projections(self, w) -> list[tuple]:
        """``(tail, Block)`` for each map P^{N_w} --> P^{N_tail}, in incoming-arrow order."""
        return [(b.source, b) for b in self.blocks[w] if b.source is not None]

    def to_json(self):
        return {"root": self.root, "height": self.height,
                "spaces": {str(v): self.spaces[v] for v in self.vertices},
                "distance": {str(v): self.distance[v] for v in self.vertices},
                "blocks": {str(v): [[b.label, b.first, b.last] for b in self.blocks[v]]
                           for v in self.vertices}}


def _gamma_graph_at(T: TreeComponent, v) -> GammaGraph:
    verts = T.subtree(v)
    tree = T.tree
    N = T.N
    dist = _distances(tree, v)
    blocks = {}
    for w in verts:
        g = T.gamma[w]
        bl = [Block("free", None, 1, g)]
        pos = g
        for a in tree.in_arrows(w):
            tail = tree.arrows[a][0]
            size = N[tail] + 1
            bl.append(Block(f"arrow:{T.kept_arrows[a]}", tail, pos + 1, pos + size))
            pos += size
        assert pos == N[w] + 1
        blocks[w] = tuple(bl)
    height = max(dist[w] for w in verts)
    layers = tuple(tuple(w for w in verts if dist[w] == s) for s in range(height + 1))
    return GammaGraph(v, verts, {w: N[w] for w in verts}, {w: dist[w] for w in verts},
                      height, blocks, layers)


def gamma_graph(T: TreeComponent, root, gamma: Mapping | None = None) -> GammaGraph:
    if root not in T.roots:
        raise NotARoot(f"{root!r} is not a sink of the tree component")
    if gamma is not None and dict(gamma) != T.gamma:
        T = TreeComponent(T.tree, T.zeroed_arrows, T.kept_arrows, T.roots, dict(gamma), T.n,
                          compute_Nw(T.tree, gamma), T.root_distance)
    return _gamma_graph_at(T, root)


@dataclass(frozen=True)
class Overlap:
    left: object
    right: object
    meet: object          # root of the shared rooted subtree
    vertices: tuple
    dimension: int        # N at the meet


@dataclass(frozen=True)
class ComponentFiber:
    component: TreeComponent
    graphs: dict                  # root -> GammaGraph
    overlaps: tuple               # every pair of roots with a common subtree
    assembly: tuple               # levels; each a tuple of Overlaps joining a new root
    redundant: tuple              # overlaps implied by the assembly
    dimension: int

    def to_json(self):
        c = self.component
        return {
            "tree": [list(a) for a in c.tree.arrows],
            "zeroed": list(c.zeroed_arrows),
            "roots": list(c.roots),
            "N": {str(v): c.N[v] for v in c.tree.vertices},
            "gamma_graphs": [self.graphs[r].to_json() for r in c.roots],
            "overlaps": [[o.left, o.right, o.meet] for o in self.overlaps],
            "assembly": [[[o.left, o.right, o.meet] for o in level] for level in self.assembly],
            "dimension": self.dimension,
        }


@dataclass(frozen=True)
class FiberDescription:
    local: LocalQuiverData
    components: tuple
    dimension: int

    def to_json(self):
        return {"n": self.local.n, "dimension": self.dimension,
                "components": [c.to_json() for c in self.components]}


def _meet(T: TreeComponent, v, w) -> Overlap | None:
    a, b = set(T.subtree(v)), set(T.subtree(w))
    common = a & b
    if not common:
        return None
    verts = tuple(x for x in T.tree.vertices if x in common)
    sinks = [x for x in verts
             if not any(T.tree.arrows[i][1] in common for i in T.tree.out_arrows(x))]
    assert len(sinks) == 1, "shared subtree must have a unique sink"
    m = sinks[0]
    return Overlap(v, w, m, verts, T.N[m])


def component_fiber(T: TreeComponent) -> ComponentFiber:
    graphs = {r: _gamma_graph_at(T, r) for r in T.roots}
    order = {r: i for i, r in enumerate(T.roots)}
    overlaps = []
    g = nx.Graph()
    g.add_nodes_from(T.roots)
    for v, w in itertools.combinations(T.roots, 2):
        o = _meet(T, v, w)
        if o is not None:
            overlaps.append(o)
            # weight = sum of gamma over the shared subtree; a maximum spanning
            # tree then glues every vertex exactly once
            g.add_edge(v, w, weight=o.dimension + 1, overlap=o)
    tree = nx.maximum_spanning_tree(g, algorithm="kruskal")
    used = set()
    levels = []
    placed = {T.roots[0]}
    frontier = [T.roots[0]]
    while frontier:
        level, nxt = [], []
        for v in frontier:
            for w in sorted(tree.neighbors(v), key=order.get):
                if w in placed:
                    continue
                o = g.edges[v, w]["overlap"]
                level.append(Overlap(v, w, o.meet, o.vertices, o.dimension))
                used.add(frozenset((v, w)))
                placed.add(w)
                nxt.append(w)
        if level:
            levels.append(tuple(level))
        frontier = nxt
    if len(placed) != len(T.roots):
        raise UnsupportedFamily("rooted subtrees do not overlap into a connected pattern")
    redundant = tuple(o for o in overlaps if frozenset((o.left, o.right)) not in used)
    dim = sum(graphs[r].dimension for r in T.roots) - sum(o.dimension for lv in levels for o in lv)
    return ComponentFiber(T, graphs, tuple(overlaps), tuple(levels), redundant, dim)


def fiber_description(L: LocalQuiverData) -> FiberDescription:
    comps = tuple(component_fiber(T) for T in nullcone_components(L))
    dims = {c.dimension for c in comps}
    dim = dims.pop() if len(dims) == 1 else max(c.dimension for c in comps)
    return FiberDescription(L, comps, dim)
