"""Cofreeness: the vertex-removal reduction and the list of prime cofree shapes."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DisconnectedQuiver, NotApplicable, NotPrime
from .quiver_core import (
    Quiver,
    QuiverSetting,
    count_quasiprimitive_cycles_through,
    is_connected,
    is_strongly_connected,
    prime_components,
)
from .rep_theory import is_oriented_cycle

FAMILIES = ("(i)", "(ii)", "(ii-special)", "(iii)", "(iv)")


@dataclass(frozen=True)
class ReductionStep:
    vertex: object
    dim: int
    out_arrow: tuple          # the removed arrow (vertex -> target)
    rerouted: tuple           # (old incoming arrow, new arrow) pairs

    def to_json(self):
        return {"vertex": self.vertex, "dim": self.dim, "target": self.out_arrow[1],
                "rerouted": [[list(old), list(new)] for old, new in self.rerouted]}


@dataclass(frozen=True)
class CofreeVerdict:
    cofree: bool
    reduced: QuiverSetting
    reduction_trace: tuple = ()
    components: tuple = ()
    family_tags: dict = field(default_factory=dict)

    def __bool__(self):
        return self.cofree

    def to_json(self):
        return {"cofree": self.cofree,
                "trace": [s.to_json() for s in self.reduction_trace],
                "families": {str(i): tag for i, tag in self.family_tags.items()}}


def _rci_obstruction(S: QuiverSetting, v) -> str | None:
    Q = S.quiver
    outs = Q.out_arrows(v)
    if len(outs) != 1:
        return f"{len(outs)} outgoing arrows"
    target = Q.arrows[outs[0]][1]
    if target == v:
        return "the only outgoing arrow is a loop"
    if S.dim(target) != 1:
        return f"target {target!r} has dimension {S.dim(target)}"
    cycles = count_quasiprimitive_cycles_through(S, v)
    if S.dim(v) < cycles:
        return f"dimension {S.dim(v)} below the {cycles} quasiprimitive cycles through it"
    return None


def rci_applicable(S: QuiverSetting, v) -> bool:
    return _rci_obstruction(S, v) is None


def _apply(S: QuiverSetting, v) -> tuple[QuiverSetting, ReductionStep]:
    Q = S.quiver
    out = Q.out_arrows(v)[0]
    target = Q.arrows[out][1]
    arrows, rerouted = [], []
    for i, (t, h) in enumerate(Q.arrows):
        if i == out:
            continue
        if h == v:
            new = (target if t == v else t, target)
            rerouted.append(((t, h), new))
            arrows.append(new)
        elif t != v:
            arrows.append((t, h))
    verts = tuple(w for w in Q.vertices if w != v)
    reduced = QuiverSetting(Quiver(verts, tuple(arrows)), tuple(S.dim(w) for w in verts))
    return reduced, ReductionStep(v, S.dim(v), Q.arrows[out], tuple(rerouted))


def apply_RcI(S: QuiverSetting, v) -> QuiverSetting:
    """Remove ``v`` along its unique arrow into a dimension-1 vertex, rerouting incoming arrows.

    Raises :class:`NotApplicable` with the failing condition as ``reason``.
    """
    reason = _rci_obstruction(S, v)
    if reason is not None:
        raise NotApplicable(v, reason)
    return _apply(S, v)[0]


def reduce_fully(S: QuiverSetting) -> tuple[QuiverSetting, tuple]:
    trace = []
    while True:
        for v in S.vertices:
            if len(S.vertices) > 1 and rci_applicable(S, v):
                S, step = _apply(S, v)
                trace.append(step)
                break
        else:
            return S, tuple(trace)


def _paths_avoiding(Q: Quiver, src, dst, avoid) -> int:
    """Number of arrow sequences src ~> dst whose interior avoids ``avoid``; Q - avoid is acyclic."""
    memo: dict = {}

    def count(x):
        if x == dst:
            return 1
        if x in memo:
            return memo[x]
        total = 0
        for ai in Q.out_arrows(x):
            y = Q.arrows[ai][1]
            if y == avoid and y != dst:
                continue
            total += count(y)
        memo[x] = total
        return total

    total = 0
    for ai in Q.out_arrows(src):
        y = Q.arrows[ai][1]
        if y == avoid and y != dst:
            continue
        total += count(y)
    return total


def _acyclic_without(Q: Quiver, v) -> bool:
    rest = [w for w in Q.vertices if w != v]
    indeg = {w: 0 for w in rest}
    for t, h in Q.arrows:
        if t != v and h != v:
            indeg[h] += 1
    stack = [w for w in rest if indeg[w] == 0]
    seen = 0
    while stack:
        w = stack.pop()
        seen += 1
        for ai in Q.out_arrows(w):
            h = Q.arrows[ai][1]
            if h != v:
                indeg[h] -= 1
                if indeg[h] == 0:
                    stack.append(h)
    return seen == len(rest)


def _match_i(P: QuiverSetting) -> bool:
    Q = P.quiver
    if not is_strongly_connected(Q):
        return False
    for v in Q.vertices:
        if P.dim(v) != 1 or not _acyclic_without(Q, v):
            continue
        if all(P.dim(w) >= _paths_avoiding(Q, v, w, v) + _paths_avoiding(Q, w, v, v) - 1
               for w in Q.vertices if w != v):
            return True
    return False


def _walk(Q: Quiver, start, stop, limit) -> list | None:
    """Follow unique outgoing arrows from ``start`` until ``stop``; the visited vertices before it."""
    seq, v = [], start
    while v != stop:
        if len(seq) > limit or len(Q.out_arrows(v)) != 1:
            return None
        seq.append(v)
        v = Q.successors(v)[0]
    return seq


def _degrees(Q: Quiver):
    return ({v: len(Q.in_arrows(v)) for v in Q.vertices},
            {v: len(Q.out_arrows(v)) for v in Q.vertices})


def match_ii_shape(P: QuiverSetting):
    """Parse the two-path shape around a dimension-1 vertex; returns (c, us, ls) or None."""
    Q = P.quiver
    nv, na = len(Q.vertices), len(Q.arrows)
    if nv < 3 or na != nv + 1:
        return None
    ind, outd = _degrees(Q)
    for c in Q.vertices:
        if P.dim(c) != 1 or ind[c] != 1 or outd[c] != 1:
            continue
        u1 = Q.successors(c)[0]
        l1 = Q.predecessors(c)[0]
        if u1 == c or l1 == c or u1 == l1 or ind[u1] != 2 or outd[l1] != 2:
            continue
        us = _walk(Q, u1, l1, nv)
        if us is None or c in us:
            continue
        nxt = [w for w in Q.successors(l1) if w != c]
        if len(nxt) != 1:
            continue
        if nxt[0] == u1:
            ls = [l1]
        else:
            rest = _walk(Q, nxt[0], u1, nv)
            if rest is None:
                continue
            ls = [l1] + rest
        if len(set(us) | set(ls) | {c}) != nv or len(us) + len(ls) + 1 != nv:
            continue
        return c, us, ls
    return None


def match_ii_special_shape(P: QuiverSetting):
    """Parse ``1 <-> x`` plus a cycle through ``x``; returns (c, x, cycle) or None."""
    Q = P.quiver
    nv, na = len(Q.vertices), len(Q.arrows)
    if nv < 2 or na != nv + 1:
        return None
    ind, outd = _degrees(Q)
    for c in Q.vertices:
        if P.dim(c) != 1 or ind[c] != 1 or outd[c] != 1:
            continue
        x = Q.successors(c)[0]
        if x == c or Q.predecessors(c)[0] != x or ind[x] != 2 or outd[x] != 2:
            continue
        nxt = [w for w in Q.successors(x) if w != c]
        if len(nxt) != 1:
            continue
        cycle = [x] if nxt[0] == x else _walk(Q, nxt[0], x, nv)
        if cycle is None:
            continue
        if nxt[0] != x:
            cycle = [x] + cycle
        if c in cycle or len(set(cycle)) + 1 != nv or len(cycle) + 1 != nv:
            continue
        return c, x, cycle
    return None


def match_iv_shape(P: QuiverSetting):
    """Two oriented cycles sharing a directed run ``c_1 .. c_s``; returns (cs_run, us, ls) or None."""
    Q = P.quiver
    nv, na = len(Q.vertices), len(Q.arrows)
    if na != nv + 1:
        return None
    ind, outd = _degrees(Q)
    heads = [v for v in Q.vertices if ind[v] == 2]
    tails = [v for v in Q.vertices if outd[v] == 2]
    if len(heads) != 1 or len(tails) != 1:
        return None
    if any(ind[v] != 1 for v in Q.vertices if v != heads[0]):
        return None
    if any(outd[v] != 1 for v in Q.vertices if v != tails[0]):
        return None
    c1, cs = heads[0], tails[0]
    if c1 == cs:
        run = [c1]
    else:
        run = _walk(Q, c1, cs, nv)
        if run is None:
            return None
        run = run + [cs]
    branches = []
    for ai in Q.out_arrows(cs):
        y = Q.arrows[ai][1]
        if y == c1:
            branches.append([])
            continue
        b = _walk(Q, y, c1, nv)
        if b is None:
            return None
        branches.append(b)
    seen = set(run)
    for b in branches:
        if seen & set(b):
            return None
        seen |= set(b)
    if len(seen) != nv:
        return None
    return run, branches[0], branches[1]


def match_cofree_family(P: QuiverSetting) -> str | None:
    """Family tag of a prime setting from the cofree list, or None."""
    if len(prime_components(P)) != 1:
        raise NotPrime("family matching needs a prime setting")
    Q = P.quiver
    if is_oriented_cycle(Q):
        return "(iii)"
    if match_ii_special_shape(P):
        return "(ii-special)"
    shape = match_ii_shape(P)
    if shape:
        _, us, ls = shape
        dims = [P.dim(w) for w in us + ls]
        low = min(dims)
        on_path = [w for w in us + ls[:1] if P.dim(w) == low]
        if len(on_path) <= 1:
            return "(ii)"
    shape = match_iv_shape(P)
    if shape:
        run, us, ls = shape
        cdims = [P.dim(w) for w in run]
        if (all(P.dim(w) >= 2 for w in us + ls) and cdims.count(2) == 1
                and all(d >= 4 for d in cdims if d != 2)):
            return "(iv)"
    if _match_i(P):
        return "(i)"
    return None


def is_cofree(S: QuiverSetting) -> CofreeVerdict:
    if not is_connected(S.quiver):
        raise DisconnectedQuiver("cofreeness is decided for connected settings")
    reduced, trace = reduce_fully(S)
    comps = tuple(prime_components(reduced))
    tags = {i: match_cofree_family(P) or "none" for i, P in enumerate(comps)}
    return CofreeVerdict(all(t != "none" for t in tags.values()), reduced, trace, comps, tags)
