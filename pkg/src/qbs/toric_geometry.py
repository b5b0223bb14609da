"""Toric model of a fiber component: extended quiver, fan, Betti numbers, cohomology ring."""
from __future__ import annotations

import itertools
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, NonPositiveGamma, UnverifiedFan, VerificationFailure
from .fiber_model import TreeComponent, topological_order
from .quiver_core import Quiver, node_limit


@dataclass(frozen=True)
class ExtendedSetting:
    """The tree with a new source ``v0`` and ``gamma(w)`` arrows ``v0 -> w``.

    Dimension vector is 1 everywhere; ``theta`` is the character -n at v0
    and gamma(w) at w.
    """

    quiver: Quiver
    source: object
    theta: dict
    n: int
    base_arrows: int    # the first base_arrows arrows come from the tree

    @property
    def rank(self) -> int:
        return len(self.quiver.arrows) - len(self.quiver.vertices) + 1

    def indegree(self, w) -> int:
        return len(self.quiver.in_arrows(w))


def _fresh_source(vertices) -> str:
    name = "v0"
    while name in vertices:
        name += "_"
    return name


def extend(T, gamma: Mapping, n: int | None = None) -> ExtendedSetting:
    tree = T.tree if isinstance(T, TreeComponent) else T
    if n is None:
        n = sum(gamma[v] for v in tree.vertices)
    for v in tree.vertices:
        if gamma.get(v, 0) < 1:
            raise NonPositiveGamma(f"gamma({v!r}) must be positive to extend")
    if sum(gamma[v] for v in tree.vertices) != n:
        raise NonPositiveGamma("gamma does not sum to n")
    v0 = _fresh_source(tree.vertices)
    arrows = list(tree.arrows)
    for w in tree.vertices:
        arrows.extend([(v0, w)] * gamma[w])
    theta = {v0: -n, **{w: gamma[w] for w in tree.vertices}}
    return ExtendedSetting(Quiver((v0,) + tree.vertices, tuple(arrows)), v0, theta, n,
                           len(tree.arrows))


def connecting_count(E: ExtendedSetting) -> int:
    Q = E.quiver
    return math.prod(2 ** E.indegree(w) - 1 for w in Q.vertices if w != E.source)


def connecting_subquivers(E: ExtendedSetting, limit: int | None = None) -> list[frozenset]:
    """Arrow sets reaching every vertex from ``v0``, as frozensets of arrow indices.

    Since the extended quiver is acyclic with ``v0`` its only source, a set
    connects exactly when it keeps at least one arrow into every other vertex.
    """
    limit = node_limit(limit)
    total = connecting_count(E)
    if total > limit:
        raise BudgetExceeded(f"{total} connecting subquivers exceed the budget {limit}")
    Q = E.quiver
    per_vertex = []
    for w in Q.vertices:
        if w == E.source:
            continue
        ins = Q.in_arrows(w)
        per_vertex.append([frozenset(c) for k in range(1, len(ins) + 1)
                           for c in itertools.combinations(ins, k)])
    return [frozenset().union(*choice) for choice in itertools.product(*per_vertex)]


def minimal_connecting_subquivers(E: ExtendedSetting) -> list[frozenset]:
    Q = E.quiver
    per_vertex = [Q.in_arrows(w) for w in Q.vertices if w != E.source]
    return [frozenset(choice) for choice in itertools.product(*per_vertex)]


@dataclass
class Fan:
    rank: int
    free: tuple                 # arrows of P, in coordinate order
    rays: dict                  # arrow index -> integer vector in Z^P
    max_cones: list             # sorted tuples of ray keys
    d: list                     # d[k] = number of k-dimensional cones
    spanning: dict = field(default_factory=dict)   # vertex -> chosen arrow a_w
    verified: bool = False

    def cone_of(self, subquiver: frozenset, arrows: int) -> tuple:
        return tuple(a for a in range(arrows) if a not in subquiver and a in self.rays)

    def to_json(self):
        keys = sorted(self.rays)
        pos = {k: i for i, k in enumerate(keys)}
        return {"rank": self.rank,
                "rays": [{"arrow": k, "vector": list(self.rays[k])} for k in keys],
                "max_cones": [[pos[k] for k in c] for c in self.max_cones],
                "d": list(self.d)}


def _cone_counts(indegrees: Sequence[int]) -> list[int]:
    poly = [1]
    for deg in indegrees:
        # keep at least one of the deg incoming arrows; j arrows dropped
        factor = [math.comb(deg, j) for j in range(deg)]
        out = [0] * (len(poly) + len(factor) - 1)
        for i, a in enumerate(poly):
            for j, b in enumerate(factor):
                out[i + j] += a * b
        poly = out
    return poly


def build_fan(E: ExtendedSetting) -> Fan:
    Q = E.quiver
    v0 = E.source
    spanning = {}
    for w in Q.vertices:
        if w == v0:
            continue
        ins = Q.in_arrows(w)
        direct = [a for a in ins if Q.arrows[a][0] == v0]
        spanning[w] = direct[0] if direct else ins[0]
    chosen = set(spanning.values())
    free = tuple(a for a in range(len(Q.arrows)) if a not in chosen)
    coord = {a: i for i, a in enumerate(free)}
    rays = {}
    for a in range(len(Q.arrows)):
        h = Q.arrows[a][1]
        if len(Q.in_arrows(h)) == 1:
            continue
        vec = [0] * len(free)
        if a in coord:
            vec[coord[a]] = 1
        else:
            w = h
            for b in free:
                if Q.arrows[b][1] == w:
                    vec[coord[b]] -= 1
                if Q.arrows[b][0] == w:
                    vec[coord[b]] += 1
        rays[a] = tuple(vec)
    max_cones = sorted(tuple(sorted(a for a in rays if a not in keep))
                       for keep in minimal_connecting_subquivers(E))
    indeg = [E.indegree(w) for w in Q.vertices if w != v0]
    return Fan(len(free), free, rays, max_cones, _cone_counts(indeg), spanning)


@dataclass(frozen=True)
class FanReport:
    rank: int
    max_cones: int
    facets: int
    smooth: bool
    complete: bool
    covering_degree: int


def _integer_inverses(mats: np.ndarray) -> np.ndarray:
    inv = np.rint(np.linalg.inv(mats.astype(float))).astype(np.int64)
    return inv


def verify_fan(F: Fan, seed: int = 0) -> FanReport:
    """Check that every maximal cone is unimodular and that they tile R^r once.

    Tiling is checked combinatorially: every facet lies in exactly two
    maximal cones, on opposite sides, and a generic vector lies in exactly
    one maximal cone.
    """
    r = F.rank
    cones = F.max_cones
    if not cones:
        raise VerificationFailure("fan has no maximal cones")
    if r == 0:
        if cones != [()]:
            raise VerificationFailure("rank-0 fan must consist of the origin")
        F.verified = True
        return FanReport(0, 1, 0, True, True, 1)
    for c in cones:
        if len(c) != r:
            raise VerificationFailure(f"maximal cone {c} has {len(c)} rays, expected {r}", (c,))
    keys = sorted(F.rays)
    row = {k: i for i, k in enumerate(keys)}
    R = np.array([F.rays[k] for k in keys], dtype=np.int64)
    idx = np.array([[row[k] for k in c] for c in cones])
    M = np.transpose(R[idx], (0, 2, 1))             # columns are rays
    Minv = _integer_inverses(M)
    eye = np.eye(r, dtype=np.int64)
    bad = np.nonzero(np.any(np.matmul(Minv, M) != eye, axis=(1, 2)))[0]
    if len(bad):
        c = cones[int(bad[0])]
        raise VerificationFailure(f"maximal cone {c} is not unimodular", (c,))

    # every facet (a cone minus one ray) must be shared by exactly two cones
    K = len(cones)
    owner = np.repeat(np.arange(K), r)
    pos = np.tile(np.arange(r), K)
    if len(keys) <= 62:
        # facets as bit masks over the rays
        bits = np.left_shift(np.int64(1), idx.astype(np.int64))
        faces = (bits.sum(axis=1)[:, None] - bits).reshape(-1)
        uniq, inverse, counts = np.unique(faces, return_inverse=True, return_counts=True)
    else:
        keep = np.ones((K, r, r), dtype=bool)
        keep[:, np.arange(r), np.arange(r)] = False
        faces = np.broadcast_to(idx[:, None, :], (K, r, r))[keep].reshape(K * r, r - 1)
        uniq, inverse, counts = np.unique(faces, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    if np.any(counts != 2):
        f = int(np.nonzero(counts != 2)[0][0])
        members = np.nonzero(inverse == f)[0]
        m0 = int(members[0])
        facet = tuple(c for c in cones[int(owner[m0])] if c != cones[int(owner[m0])][int(pos[m0])])
        raise VerificationFailure(f"facet {facet} lies in {int(counts[f])} maximal cones",
                                  tuple(cones[int(owner[m])] for m in members))
    order = np.argsort(inverse, kind="stable")
    first, second = order[0::2], order[1::2]
    a, pa = owner[first], pos[first]
    b, pb = owner[second], pos[second]
    xa = R[idx[a, pa]]
    xb = R[idx[b, pb]]
    # coordinate of the opposite extra ray along the omitted ray must be negative
    ca = np.einsum("ki,ki->k", Minv[a, pa, :], xb)
    cb = np.einsum("ki,ki->k", Minv[b, pb, :], xa)
    wrong = np.nonzero((ca >= 0) | (cb >= 0))[0]
    if len(wrong):
        k = int(wrong[0])
        A, B = cones[int(a[k])], cones[int(b[k])]
        raise VerificationFailure(f"cones {A} and {B} lie on the same side of a common facet",
                                  (A, B))
    n_facets = len(uniq)

    rng = np.random.default_rng(seed)
    for _ in range(20):
        y = rng.integers(-10**6, 10**6, size=r)
        coords = np.einsum("kij,j->ki", Minv, y)
        if np.all(coords != 0):
            break
    inside = int(np.sum(np.all(coords > 0, axis=1)))
    if inside != 1:
        raise VerificationFailure(f"a generic vector lies in {inside} maximal cones")
    if F.d and F.d[-1] != len(cones):
        raise VerificationFailure(f"d_r = {F.d[-1]} but there are {len(cones)} maximal cones")
    F.verified = True
    return FanReport(r, len(cones), n_facets, True, True, inside)


def betti_numbers(F: Fan) -> list[int]:
    """Even Betti numbers ``b_0, b_2, ..., b_2r`` from the cone counts of a verified fan."""
    if not F.verified:
        raise UnverifiedFan("run verify_fan first")
    r = F.rank
    d = F.d
    return [sum((-1) ** (i - k) * math.comb(i, k) * d[r - i] for i in range(k, r + 1))
            for k in range(r + 1)]


def full_betti(F: Fan) -> list[int]:
    """All Betti numbers ``b_0 .. b_2r`` with the odd ones as explicit zeros."""
    out = []
    for b in betti_numbers(F):
        out.extend([b, 0])
    return out[:-1]


@dataclass(frozen=True)
class CohomologyPresentation:
    generators: tuple           # surviving D_w
    eliminated: dict            # vertex -> linear form it was rewritten to
    relations: tuple            # per surviving vertex: tuple of factors (linear forms)
    relation_vertices: tuple
    betti: tuple                # graded ranks of the quotient ring
    rank: int

    def to_json(self):
        return {"generators": [f"D_{g}" for g in self.generators],
                "relations": [[_form_terms(f) for f in rel] for rel in self.relations],
                "betti": list(self.betti),
                "rank": self.rank}

    def __str__(self):
        gens = ", ".join(f"D_{g}" for g in self.generators)
        rels = ", ".join(format_relation(rel) for rel in self.relations)
        return f"Z[{gens}]/({rels})"


def format_relation(factors) -> str:
    """Product of linear forms with repeated factors written as powers."""
    counts: dict = {}
    for f in factors:
        key = tuple(sorted(f.items(), key=lambda t: str(t[0])))
        counts[key] = counts.get(key, 0) + 1
    parts = []
    for key, k in counts.items():
        body = format_form(dict(key))
        if k > 1:
            body = f"{body}^{k}" if len(key) == 1 and key[0][1] == 1 else f"({body})^{k}"
        elif len(key) > 1 or (key and key[0][1] != 1):
            body = f"({body})"
        parts.append(body)
    return "*".join(parts)


def _form_terms(form: Mapping) -> list:
    return [[f"D_{g}", c] for g, c in sorted(form.items(), key=lambda t: str(t[0]))]


def format_form(form: Mapping) -> str:
    if not form:
        return "0"
    parts = []
    for g, c in form.items():
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        parts.append(f"{sign} {mag}D_{g}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _sub(f: Mapping, g: Mapping) -> dict:
    out = dict(f)
    for k, c in g.items():
        out[k] = out.get(k, 0) - c
    return {k: c for k, c in out.items() if c}


def cohomology_presentation(E: ExtendedSetting) -> CohomologyPresentation:
    """Presentation ``Z[D_w]/(prod over arrows into w of (D_head - D_tail), D_v0)``.

    Vertices with a single incoming arrow are eliminated first: their
    generator equals the one at the tail of that arrow.
    """
    Q = E.quiver
    v0 = E.source
    form: dict = {v0: {}}
    eliminated = {}
    survivors = []
    for w in topological_order(Q):
        if w == v0:
            continue
        ins = Q.in_arrows(w)
        if len(ins) == 1:
            form[w] = dict(form[Q.arrows[ins[0]][0]])
            eliminated[w] = form[w]
        else:
            form[w] = {w: 1}
            survivors.append(w)
    survivors = [w for w in Q.vertices if w in set(survivors)]
    relations = tuple(tuple(_sub(form[w], form[Q.arrows[a][0]]) for a in Q.in_arrows(w))
                      for w in survivors)
    degrees = [E.indegree(w) for w in survivors]
    poly = [1]
    for deg in degrees:
        out = [0] * (len(poly) + deg - 1)
        for i, a in enumerate(poly):
            for j in range(deg):
                out[i + j] += a
        poly = out
    return CohomologyPresentation(tuple(survivors), eliminated, relations, tuple(survivors),
                                  tuple(poly), math.prod(degrees))


def nonnegative_representative(E: ExtendedSetting, lam: Sequence[int]) -> list[int]:
    """Shift ``lam`` by characters of the torus until no coordinate is negative.

    For every arrow ``a`` with ``lam(a) < 0`` the character that is 1 on the
    vertices reachable through ``a`` and 0 elsewhere is added ``-lam(a)`` times.
    """
    Q = E.quiver
    lam = list(lam)
    out = list(lam)
    for a, value in enumerate(lam):
        if value >= 0:
            continue
        head = Q.arrows[a][1]
        above = {head}
        todo = [head]
        while todo:
            x = todo.pop()
            for y in Q.successors(x):
                if y not in above:
                    above.add(y)
                    todo.append(y)
        for b, (t, h) in enumerate(Q.arrows):
            xi = int(h in above) - int(t in above)
            out[b] -= value * xi
    return out


@dataclass(frozen=True)
class ToricModel:
    extended: ExtendedSetting
    fan: Fan
    report: FanReport
    betti: tuple
    cohomology: CohomologyPresentation

    def to_json(self):
        return {"rank": self.fan.rank, "fan": self.fan.to_json(), "betti": list(self.betti),
                "betti_full": full_betti(self.fan), "cohomology": self.cohomology.to_json()}


def toric_model(T: TreeComponent) -> ToricModel:
    E = extend(T, T.gamma, T.n)
    F = build_fan(E)
    report = verify_fan(F)
    return ToricModel(E, F, report, tuple(betti_numbers(F)), cohomology_presentation(E))
