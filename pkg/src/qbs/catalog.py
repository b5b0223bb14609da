"""Exhaustive catalogs of small settings, deduplicated up to vertex relabeling."""
from __future__ import annotations

import itertools
from collections.abc import Iterator

from .quiver_core import Quiver, QuiverSetting, is_strongly_connected

VERTEX_NAMES = tuple("abcdefgh")


def _names(n: int) -> tuple:
    return VERTEX_NAMES[:n]


def canonical_form(dims: tuple, arrows) -> tuple:
    """Least ``(dims, sorted arrows)`` over all vertex permutations; arrows are index pairs."""
    n = len(dims)
    best = None
    for perm in itertools.permutations(range(n)):
        d = tuple(dims[perm[i]] for i in range(n))
        inv = {p: i for i, p in enumerate(perm)}
        a = tuple(sorted((inv[t], inv[h]) for t, h in arrows))
        key = (d, a)
        if best is None or key < best:
            best = key
    return best


def setting_from_indices(dims: tuple, arrows) -> QuiverSetting:
    names = _names(len(dims))
    return QuiverSetting(Quiver(names, tuple((names[t], names[h]) for t, h in arrows)), dims)


def quiver_classes(n: int, max_arrows: int) -> list[tuple]:
    """Arrow multisets on ``n`` vertices with at most ``max_arrows`` arrows, one per
    isomorphism class, as sorted tuples of index pairs."""
    pairs = [(t, h) for t in range(n) for h in range(n)]
    perms = list(itertools.permutations(range(n)))
    seen = set()
    out = []
    for k in range(max_arrows + 1):
        for arrows in itertools.combinations_with_replacement(pairs, k):
            if arrows in seen:
                continue
            orbit = {tuple(sorted((p[t], p[h]) for t, h in arrows)) for p in perms}
            seen |= orbit
            out.append(min(orbit))
    return out


def simplicity_catalog(max_vertices: int = 4, max_arrows: int = 6,
                       max_dim: int = 2) -> Iterator[QuiverSetting]:
    """Every setting up to isomorphism of the quiver, with every dimension vector
    in ``0..max_dim`` except the zero vector."""
    for n in range(1, max_vertices + 1):
        for arrows in quiver_classes(n, max_arrows):
            for dims in itertools.product(range(max_dim + 1), repeat=n):
                if any(dims):
                    yield setting_from_indices(dims, arrows)


def _reduced_ok(n, dims, loops, arrows) -> bool:
    inw = [0] * n
    outw = [0] * n
    for t, h in arrows:
        inw[h] += dims[t]
        outw[t] += dims[h]
    return all(inw[v] >= _in_need(dims, loops, v) and outw[v] >= _in_need(dims, loops, v)
               for v in range(n))


def reduced_catalog(max_vertices: int = 5, max_dim: int = 3,
                    max_arrows: int = 8) -> Iterator[QuiverSetting]:
    """All reduced settings with positive dimensions, up to isomorphism.

    Built vertex by vertex from incoming multisets that already satisfy the
    incoming half of the reducedness bounds; the outgoing half and strong
    connectivity are checked at the end.
    """
    seen = set()
    for n in range(2, max_vertices + 1):
        others = [[t for t in range(n) if t != v] for v in range(n)]
        for dims in itertools.combinations_with_replacement(range(max_dim, 0, -1), n):
            loop_choices = [range(0, 1) if d == 1 else range(0, max_arrows + 1) for d in dims]
            for loops in itertools.product(*loop_choices):
                budget = max_arrows - sum(loops)
                if budget < n:
                    continue
                yield from _reduced_fill(n, dims, loops, budget, others, seen)


def _in_need(dims, loops, v) -> int:
    # weight of non-loop arrows needed on each side; a loop adds dims[v] to both
    # sides of chi, so one loop leaves a bound of 2
    if loops[v] >= 2:
        return 1
    if loops[v] == 1:
        return 2
    return dims[v] + 1


def _reduced_fill(n, dims, loops, budget, others, seen):
    chosen: list = []

    def rec(v, left):
        if v == n:
            arrows = [a for part in chosen for a in part]
            if not _reduced_ok(n, dims, loops, arrows):
                return
            full = arrows + [(w, w) for w in range(n) for _ in range(loops[w])]
            S = setting_from_indices(dims, full)
            if not is_strongly_connected(S.quiver):
                return
            key = canonical_form(dims, full)
            if key in seen:
                return
            seen.add(key)
            yield setting_from_indices(*key)
            return
        need = _in_need(dims, loops, v)
        # the remaining vertices need at least one incoming arrow each
        room = left - (n - v - 1)
        for k in range(1, room + 1):
            for tails in itertools.combinations_with_replacement(others[v], k):
                if sum(dims[t] for t in tails) < need:
                    continue
                chosen.append([(t, v) for t in tails])
                yield from rec(v + 1, left - k)
                chosen.pop()

    yield from rec(0, budget)


def cycle(names, start: int = 0) -> list[tuple]:
    k = len(names)
    return [(names[i], names[(i + 1) % k]) for i in range(k)]


def cycle_sums(max_cycles: int = 3, max_length: int = 4, min_length: int = 1,
               max_vertices: int | None = None) -> Iterator[tuple[QuiverSetting, tuple]]:
    """Connected sums of oriented cycles with dimension vector 1.

    Yields ``(setting, lengths)`` where ``lengths`` holds the ``n_i`` of each
    cyclic summand (a cycle of type A~_{n_i} has ``n_i + 1`` vertices).
    Cycle ``j`` is attached at its own first vertex to a vertex of the sum
    built so far.  The second cycle only goes to the first vertex of the
    first one, since rotating a cycle gives an isomorphic sum; later cycles
    try every vertex.
    """
    for k in range(1, max_cycles + 1):
        for lengths in itertools.product(range(min_length, max_length + 1), repeat=k):
            total = sum(lengths) + 1
            if max_vertices is not None and total > max_vertices:
                continue
            yield from _glue(lengths)


def _glue(lengths):
    first = [f"x{i}" for i in range(lengths[0] + 1)]

    def rec(j, verts, arrows):
        if j == len(lengths):
            S = QuiverSetting(Quiver(tuple(verts), tuple(arrows)), (1,) * len(verts))
            yield S, tuple(lengths)
            return
        fresh = [f"y{j}_{i}" for i in range(1, lengths[j] + 1)]
        for anchor in (verts[:1] if j == 1 else verts):
            yield from rec(j + 1, verts + fresh, arrows + cycle([anchor] + fresh))

    yield from rec(1, first, cycle(first) if lengths[0] > 0 else [(first[0], first[0])])
