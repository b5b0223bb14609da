"""Slow, independent reference computations used to cross-check the fast paths."""
from __future__ import annotations

import itertools
import random
from collections import Counter
from collections.abc import Sequence

import networkx as nx
import numpy as np

from .errors import BudgetExceeded
from .quiver_core import Quiver, QuiverSetting, node_limit

PRIME = 32749


# reachability ---------------------------------------------------------------

def has_path_bruteforce(Q: Quiver, src, dst) -> bool:
    """Search simple vertex paths ``src ~> dst`` one by one."""
    if src == dst:
        return True
    stack = [(src, (src,))]
    while stack:
        x, seen = stack.pop()
        for y in Q.successors(x):
            if y == dst:
                return True
            if y not in seen:
                stack.append((y, seen + (y,)))
    return False


def strongly_connected_bruteforce(Q: Quiver) -> bool:
    return all(has_path_bruteforce(Q, u, w) for u in Q.vertices for w in Q.vertices)


# quasiprimitive cycles ------------------------------------------------------

def quasiprimitive_cycles_bruteforce(S: QuiverSetting, v, limit: int | None = None) -> set:
    """Closed walks at ``v`` generated without pruning, filtered by the visit budget afterwards.

    Walk length is bounded by ``sum(alpha)`` since every step has a tail.
    """
    Q = S.quiver
    alpha = S.alpha
    budget = node_limit(limit)
    max_len = sum(S.dims)
    found = set()
    frontier = [((ai,), Q.arrows[ai][1]) for ai in Q.out_arrows(v)]
    steps = 0
    while frontier:
        nxt = []
        for walk, end in frontier:
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"walk enumeration exceeded {budget} steps")
            if end == v:
                tails = Counter(Q.arrows[a][0] for a in walk)
                if all(c <= alpha[w] for w, c in tails.items()):
                    rots = [walk[i:] + walk[:i] for i in range(len(walk)) if Q.arrows[walk[i]][0] == v]
                    found.add(min(rots))
            if len(walk) < max_len:
                nxt.extend((walk + (ai,), Q.arrows[ai][1]) for ai in Q.out_arrows(end))
        frontier = nxt
    return found


# simplicity -----------------------------------------------------------------

def _rank_mod_p(rows: np.ndarray, p: int = PRIME) -> int:
    m = rows.copy() % p
    r = 0
    nrows, ncols = m.shape
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        r += 1
        if r == nrows:
            break
    return r


def random_representation(S: QuiverSetting, rng: random.Random, p: int = PRIME) -> list[np.ndarray]:
    """Block matrices on ``k^N``, ``N = sum(alpha)``, one per arrow, with random entries mod p."""
    offs = list(itertools.accumulate(S.dims, initial=0))
    N = offs[-1]
    Q = S.quiver
    mats = []
    for t, h in Q.arrows:
        M = np.zeros((N, N), dtype=np.int64)
        i, j = Q.index(t), Q.index(h)
        for r in range(offs[j], offs[j + 1]):
            for c in range(offs[i], offs[i + 1]):
                M[r, c] = rng.randrange(p)
        mats.append(M)
    return mats


def spanned_dimension(S: QuiverSetting, mats: Sequence[np.ndarray], p: int = PRIME) -> int:
    """Dimension of the span of all path matrices (vertex idempotents included)."""
    offs = list(itertools.accumulate(S.dims, initial=0))
    N = offs[-1]
    basis: list[np.ndarray] = []
    rank = 0
    todo = []
    for i in range(len(S.dims)):
        E = np.zeros((N, N), dtype=np.int64)
        for r in range(offs[i], offs[i + 1]):
            E[r, r] = 1
        if S.dims[i]:
            todo.append(E)
    while todo:
        M = todo.pop()
        trial = np.array(basis + [M.reshape(-1)])
        new_rank = _rank_mod_p(trial, p)
        if new_rank == rank:
            continue
        basis.append(M.reshape(-1))
        rank = new_rank
        if rank == N * N:
            break
        todo.extend(A @ M % p for A in mats)
    return rank


def simple_by_random_rep(S: QuiverSetting, trials: int = 3, seed: int = 0) -> bool:
    """Absolutely irreducible random representation exists (Burnside: full matrix algebra)."""
    N = sum(S.dims)
    rng = random.Random(seed)
    for _ in range(trials):
        if spanned_dimension(S, random_representation(S, rng)) == N * N:
            return True
    return False


def simplicity_rule(S: QuiverSetting) -> bool:
    """The combinatorial criterion rewritten on an adjacency matrix, without shared helpers."""
    keep = [i for i, d in enumerate(S.dims) if d]
    idx = {S.vertices[i]: k for k, i in enumerate(keep)}
    a = [S.dims[i] for i in keep]
    n = len(keep)
    A = np.zeros((n, n), dtype=np.int64)
    for t, h in S.arrows:
        if t in idx and h in idx:
            A[idx[t], idx[h]] += 1
    reach = (A > 0).astype(np.int64) + np.eye(n, dtype=np.int64)
    for _ in range(n):
        reach = ((reach @ reach) > 0).astype(np.int64)
    strong = bool(reach.all())
    total = int(A.sum())
    if n == 1 and total == 0:
        return a[0] == 1
    if n >= 1 and total == n and (A.sum(axis=0) == 1).all() and (A.sum(axis=1) == 1).all() and strong:
        return all(x == 1 for x in a)
    if not strong:
        return False
    av = np.array(a)
    E = np.eye(n, dtype=np.int64) - A
    return bool((av @ E <= 0).all() and (E @ av <= 0).all())


# connecting subquivers ------------------------------------------------------

def connecting_subquivers_bruteforce(Q: Quiver, source, limit: int | None = None) -> list[frozenset]:
    m = len(Q.arrows)
    budget = node_limit(limit)
    if 2 ** m > budget:
        raise BudgetExceeded(f"2^{m} arrow subsets exceed the budget {budget}")
    out = []
    for mask in range(2 ** m):
        keep = [i for i in range(m) if mask >> i & 1]
        seen = {source}
        todo = [source]
        while todo:
            x = todo.pop()
            for i in keep:
                t, h = Q.arrows[i]
                if t == x and h not in seen:
                    seen.add(h)
                    todo.append(h)
        if len(seen) == len(Q.vertices):
            out.append(frozenset(keep))
    return out


def minimal_elements(sets: Sequence[frozenset]) -> list[frozenset]:
    return [s for s in sets if not any(o < s for o in sets)]


# nullcone components ---------------------------------------------------------

def nullcone_component_count_bruteforce(S: QuiverSetting) -> int:
    """Minimal arrow sets meeting every oriented cycle (loops ignored)."""
    Q = S.quiver
    arrows = [i for i, (t, h) in enumerate(Q.arrows) if t != h]
    g = nx.MultiDiGraph()
    g.add_nodes_from(Q.vertices)
    for i in arrows:
        g.add_edge(*Q.arrows[i], key=i)
    cycles = []
    for cyc in nx.simple_cycles(nx.DiGraph(g)):
        # expand a vertex cycle into all its arrow cycles
        steps = [[i for i in arrows if Q.arrows[i] == (cyc[k], cyc[(k + 1) % len(cyc)])]
                 for k in range(len(cyc))]
        cycles.extend(frozenset(c) for c in itertools.product(*steps))
    hitting = []
    for k in range(len(arrows) + 1):
        for z in itertools.combinations(arrows, k):
            zs = frozenset(z)
            if all(zs & c for c in cycles) and not any(h <= zs for h in hitting):
                hitting.append(zs)
    return len(hitting)


# flat decompositions -----------------------------------------------------------

def has_flat_decomposition_bruteforce(S: QuiverSetting) -> bool:
    from .flat_locus import find_flat_decomposition
    return find_flat_decomposition(S, prune=False) is not None
