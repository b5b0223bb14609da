"""Flatness of the Brauer-Severi fibration at a point, and the singular shapes behind it."""
from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass

from more_itertools import set_partitions

from .cofree_classifier import match_ii_shape, match_ii_special_shape, match_iv_shape
from .errors import BudgetExceeded, NotReduced
from .quiver_core import Quiver, QuiverSetting, chi, node_limit, prime_components
from .rep_theory import (
    DecompositionType,
    LocalQuiverData,
    enumerate_simple_subdimvectors,
    has_simple_reps,
    is_oriented_cycle,
    is_reduced,
    iter_decompositions,
    local_quiver,
)

AZUMAYA = "Azumaya"
FLAT_NON_AZUMAYA = "FlatNonAzumaya"
NON_FLAT = "NonFlat"


def _flat_family(P: QuiverSetting) -> str | None:
    Q = P.quiver
    dims = P.dims
    if len(Q.vertices) == 1 and not Q.arrows:
        return "point" if dims[0] == 1 else None
    if is_oriented_cycle(Q):
        return "cyclic" if all(d == 1 for d in dims) else None
    shape = match_ii_shape(P)
    if shape:
        _, us, ls = shape
        d = P.dim(us[0])
        if (d >= 2 and len(ls) >= 2 and all(P.dim(w) == d for w in us + ls[:1])
                and all(P.dim(w) == d - 1 for w in ls[1:])):
            return "two-path"
    shape = match_ii_special_shape(P)
    if shape:
        _, x, cycle = shape
        d = P.dim(x)
        rest = [P.dim(w) for w in cycle[1:]]
        if d >= 2 and all(e == d for e in rest):
            return "d-cycle"
        if d >= 2 and all(e == d - 1 for e in rest):
            return "d-1-cycle"
    shape = match_iv_shape(P)
    if shape:
        run, _, _ = shape
        if len(run) == 1 and all(d == 2 for d in dims):
            return "double-cycle-2"
    return None


def is_flat_local_setting(S: QuiverSetting) -> tuple[bool, list]:
    """Whether every prime component of a local setting is in the flat list.

    Returns ``(flat, tags)`` with one family tag (or None) per prime component.
    """
    tags = [_flat_family(P) for P in prime_components(S)]
    return all(t is not None for t in tags), tags


def cycle_sum_cycles(S: QuiverSetting) -> list[list[int]] | None:
    """Arrow indices of the oriented cycles (length >= 2) when ``S`` is a connected
    sum of cyclic quivers with dimension vector 1, loops allowed; otherwise None."""
    if any(d != 1 for d in S.dims):
        return None
    Q = S.quiver
    loopless = [i for i, (t, h) in enumerate(Q.arrows) if t != h]
    if not loopless:
        return [] if len(Q.vertices) == 1 else None
    stripped = QuiverSetting(Quiver(Q.vertices, tuple(Q.arrows[i] for i in loopless)), S.dims)
    try:
        comps = prime_components(stripped)
    except ValueError:
        return None
    cycles = []
    for comp in comps:
        if not is_oriented_cycle(comp.quiver):
            return None
        idx, used = [], set()
        for a in comp.arrows:
            for i in loopless:
                if Q.arrows[i] == a and i not in used:
                    used.add(i)
                    idx.append(i)
                    break
        cycles.append(sorted(idx))
    return cycles


@dataclass(frozen=True)
class PointClass:
    kind: str
    local: LocalQuiverData
    fiber_dim: int | None
    family: str | None = None

    def to_json(self):
        from .io import local_to_json
        return {"kind": self.kind, "local": local_to_json(self.local),
                "fiber_dim": self.fiber_dim, "family": self.family}


def null_dimension_formula(L: LocalQuiverData) -> int | None:
    """Fiber dimension ``dim Null + n - dim GL`` for cycle-sum local settings, else None."""
    cycles = cycle_sum_cycles(L.setting)
    if cycles is None or L.n is None:
        return None
    Q = L.setting.quiver
    nonloop = sum(1 for t, h in Q.arrows if t != h)
    null_dim = nonloop - len(cycles)
    gl_dim = sum(d * d for d in L.setting.dims)
    return null_dim + L.n - gl_dim


def classify_local(L: LocalQuiverData) -> PointClass:
    S = L.setting
    if len(S.vertices) == 1 and S.dims[0] == 1:
        return PointClass(AZUMAYA, L, None if L.n is None else L.n - 1, "azumaya")
    flat, tags = is_flat_local_setting(S)
    if flat:
        fam = ",".join(sorted(set(tags)))
        return PointClass(FLAT_NON_AZUMAYA, L, None if L.n is None else L.n - 1, fam)
    return PointClass(NON_FLAT, L, null_dimension_formula(L), None)


def classify_point(S: QuiverSetting, gamma: Mapping | None, D: DecompositionType) -> PointClass:
    return classify_local(local_quiver(S, D, gamma))


def _flat_prune(Q: Quiver):
    # flat local settings never have parallel arrows between distinct vertices,
    # nor more than two loops at a vertex of dimension >= 2
    def prune(chosen, beta, m):
        if m >= 2 and 1 - chi(Q, beta, beta) > 2:
            return True
        for other, _ in chosen:
            if -chi(Q, beta, other) > 1 or -chi(Q, other, beta) > 1:
                return True
        return False
    return prune


def flat_non_azumaya_decompositions(S: QuiverSetting, gamma: Mapping | None = None,
                                    prune: bool = True):
    """Yield ``(D, PointClass)`` for every decomposition classified FlatNonAzumaya."""
    simples = enumerate_simple_subdimvectors(S)
    for D in iter_decompositions(S, simples, _flat_prune(S.quiver) if prune else None):
        if len(D.summands) == 1 and D.summands[0][1] == 1:
            continue
        pc = classify_point(S, gamma, D)
        if pc.kind == FLAT_NON_AZUMAYA:
            yield D, pc


def find_flat_decomposition(S: QuiverSetting, gamma: Mapping | None = None, prune: bool = True):
    return next(flat_non_azumaya_decompositions(S, gamma, prune), None)


@dataclass(frozen=True)
class ShapeWitness:
    blobs: tuple          # vertex tuples, one per local vertex
    pattern: QuiverSetting  # quotient quiver on blob names, dimension 1
    cycles: tuple

    def decomposition(self, S: QuiverSetting) -> DecompositionType:
        return DecompositionType(tuple(
            (tuple(S.dim(v) if v in blob else 0 for v in S.vertices), 1) for blob in self.blobs))

    def to_json(self):
        return {"blobs": [list(b) for b in self.blobs],
                "pattern": [list(a) for a in self.pattern.arrows],
                "cycles": len(self.cycles)}


def _check_partition(S: QuiverSetting, parts) -> ShapeWitness | None:
    Q = S.quiver
    order = {v: i for i, v in enumerate(Q.vertices)}
    blobs = sorted((tuple(sorted(p, key=order.get)) for p in parts), key=lambda b: order[b[0]])
    where = {v: i for i, b in enumerate(blobs) for v in b}
    names = tuple(f"b{i + 1}" for i in range(len(blobs)))
    arrows = []
    for t, h in Q.arrows:
        if where[t] != where[h]:
            if S.dim(t) != 1 or S.dim(h) != 1:
                return None
            arrows.append((names[where[t]], names[where[h]]))
    pattern = QuiverSetting(Quiver(names, tuple(arrows)), (1,) * len(names))
    cycles = cycle_sum_cycles(pattern)
    if not cycles:
        return None
    for b in blobs:
        if not has_simple_reps(S.restrict(b)):
            return None
    return ShapeWitness(tuple(blobs), pattern, tuple(map(tuple, cycles)))


def _components_without(Q: Quiver, removed: frozenset) -> list[set]:
    parent = {v: v for v in Q.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, (t, h) in enumerate(Q.arrows):
        if i not in removed:
            parent[find(t)] = find(h)
    groups: dict = {}
    for v in Q.vertices:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def cut_candidates(S: QuiverSetting) -> list[int]:
    """Arrows between distinct dimension-1 vertices lying in some 2-arrow cut.

    Every gluing arrow of a witness lies on a pattern cycle, and two arrows of
    one pattern cycle disconnect the underlying graph.
    """
    Q = S.quiver
    free = [i for i, (t, h) in enumerate(Q.arrows) if t != h and S.dim(t) == 1 and S.dim(h) == 1]
    found = set()
    for x in range(len(free)):
        for y in range(x + 1, len(free)):
            e, f = free[x], free[y]
            if len(_components_without(Q, frozenset((e, f)))) > 1:
                found.update((e, f))
    return sorted(found)


def singular_shape_check(S: QuiverSetting, limit: int | None = None) -> tuple[bool, ShapeWitness | None]:
    """Look for a partition of ``S`` into simple blobs glued in a pattern of
    oriented cycles, with every gluing arrow between dimension-1 vertices.

    The witness returned is the one with the most blobs; ties go to the
    first found.
    """
    if not is_reduced(S):
        raise NotReduced("the singular shape check expects a reduced setting")
    cand = cut_candidates(S)
    limit = node_limit(limit)
    if 2 ** len(cand) > limit:
        raise BudgetExceeded(f"{len(cand)} cut candidates exceed the search budget {limit}")
    best, seen = None, set()
    for k in range(len(cand), 1, -1):
        for cut in itertools.combinations(cand, k):
            parts = _components_without(S.quiver, frozenset(cut))
            if len(parts) < 2:
                continue
            key = frozenset(frozenset(p) for p in parts)
            if key in seen:
                continue
            seen.add(key)
            w = _check_partition(S, parts)
            if w is not None and (best is None or len(w.blobs) > len(best.blobs)):
                best = w
    return best is not None, best


def singular_shape_check_bruteforce(S: QuiverSetting) -> tuple[bool, ShapeWitness | None]:
    """Same question answered by trying every set partition of the vertices."""
    if not is_reduced(S):
        raise NotReduced("the singular shape check expects a reduced setting")
    best = None
    for parts in set_partitions(list(S.vertices)):
        if len(parts) < 2:
            continue
        w = _check_partition(S, parts)
        if w is not None and (best is None or len(w.blobs) > len(best.blobs)):
            best = w
    return best is not None, best
