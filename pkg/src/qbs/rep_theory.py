"""Simple dimension vectors, reduced settings, semisimple types and local quivers."""
from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field

from .errors import (
    BudgetExceeded,
    EmptySupport,
    InvalidDecomposition,
    NegativeArrowCount,
    NotStronglyConnected,
    TooFewVertices,
)
from .quiver_core import (
    Quiver,
    QuiverSetting,
    as_vector,
    chi,
    is_strongly_connected,
    unit,
)

MAX_DECOMPOSITION_DIM = 6
MAX_DECOMPOSITION_VERTICES = 8


@dataclass(frozen=True)
class SimplicityVerdict:
    """Outcome of the simple-representation criterion.

    ``case`` is one of ``cyclic``, ``one-loop``, ``point`` or ``euler`` when
    simple; ``violated`` names the failing condition otherwise, e.g.
    ``not-strongly-connected`` or ``euler-in:v`` for ``chi(alpha, e_v) > 0``.
    """

    simple: bool
    case: str | None = None
    violated: str | None = None

    def __bool__(self):
        return self.simple


def is_oriented_cycle(Q: Quiver) -> bool:
    """True for the cyclic orientation of extended Dynkin A (one loop included)."""
    if not Q.vertices or len(Q.arrows) != len(Q.vertices):
        return False
    if any(len(Q.out_arrows(v)) != 1 or len(Q.in_arrows(v)) != 1 for v in Q.vertices):
        return False
    start = Q.vertices[0]
    v, steps = start, 0
    while True:
        v = Q.successors(v)[0]
        steps += 1
        if v == start:
            return steps == len(Q.vertices)


def simplicity_verdict(S: QuiverSetting) -> SimplicityVerdict:
    supp = S.support()
    if not supp.vertices:
        raise EmptySupport("dimension vector is identically zero")
    Q, alpha = supp.quiver, supp.alpha
    nv = len(Q.vertices)
    if nv >= 2 and is_oriented_cycle(Q):
        if all(d == 1 for d in supp.dims):
            return SimplicityVerdict(True, case="cyclic")
        return SimplicityVerdict(False, violated="cyclic-dimension")
    if nv == 1 and len(Q.arrows) == 1:
        if supp.dims[0] == 1:
            return SimplicityVerdict(True, case="one-loop")
        return SimplicityVerdict(False, violated="loop-dimension")
    if nv == 1 and not Q.arrows and supp.dims[0] == 1:
        return SimplicityVerdict(True, case="point")
    if not is_strongly_connected(Q):
        return SimplicityVerdict(False, violated="not-strongly-connected")
    for v in Q.vertices:
        e = unit(Q, v)
        if chi(Q, alpha, e) > 0:
            return SimplicityVerdict(False, violated=f"euler-in:{v}")
        if chi(Q, e, alpha) > 0:
            return SimplicityVerdict(False, violated=f"euler-out:{v}")
    return SimplicityVerdict(True, case="euler")


def has_simple_reps(S: QuiverSetting) -> bool:
    return simplicity_verdict(S).simple


def is_reduced(S: QuiverSetting) -> bool:
    Q = S.quiver
    if len(Q.vertices) < 2:
        raise TooFewVertices("reducedness is defined for at least two vertices")
    if not is_strongly_connected(Q):
        raise NotStronglyConnected("reducedness needs a strongly connected quiver")
    alpha = S.alpha
    for v in Q.vertices:
        loops = Q.loops(v)
        if loops and alpha[v] == 1:
            return False
        bound = {0: -1, 1: -2}.get(loops)
        if bound is None:
            continue
        e = unit(Q, v)
        if chi(Q, alpha, e) > bound or chi(Q, e, alpha) > bound:
            return False
    return True


def _check_caps(S: QuiverSetting, max_dim: int, max_vertices: int):
    if len(S.vertices) > max_vertices or max(S.dims, default=0) > max_dim:
        raise BudgetExceeded(
            f"decomposition enumeration capped at {max_vertices} vertices and "
            f"dimension {max_dim}")


def _order_key(beta: tuple) -> tuple:
    # graded by total dimension, then earlier vertices first
    return (sum(beta), tuple(-b for b in beta))


def enumerate_simple_subdimvectors(S: QuiverSetting, max_dim: int = MAX_DECOMPOSITION_DIM,
                                   max_vertices: int = MAX_DECOMPOSITION_VERTICES) -> list[tuple]:
    """Nonzero ``beta <= alpha`` admitting simple representations, as tuples."""
    _check_caps(S, max_dim, max_vertices)
    found = []
    for beta in itertools.product(*(range(d + 1) for d in S.dims)):
        if any(beta) and has_simple_reps(S.with_dims(beta)):
            found.append(beta)
    found.sort(key=_order_key)
    return found


@dataclass(frozen=True)
class DecompositionType:
    """Semisimple type: summands ``(beta, multiplicity)`` with betas as canonical tuples."""

    summands: tuple

    def __post_init__(self):
        merged: dict[tuple, int] = {}
        for beta, m in self.summands:
            beta = tuple(int(b) for b in beta)
            if m < 1:
                raise InvalidDecomposition(f"multiplicity {m} is not positive")
            merged[beta] = merged.get(beta, 0) + int(m)
        ordered = tuple(sorted(merged.items(), key=lambda s: _order_key(s[0])))
        object.__setattr__(self, "summands", ordered)

    @property
    def total(self) -> tuple:
        if not self.summands:
            return ()
        n = len(self.summands[0][0])
        return tuple(sum(m * b[i] for b, m in self.summands) for i in range(n))

    def size(self) -> int:
        return sum(m for _, m in self.summands)

    @classmethod
    def trivial(cls, S: QuiverSetting) -> "DecompositionType":
        return cls(((S.dims, 1),))

    @classmethod
    def finest(cls, S: QuiverSetting) -> "DecompositionType":
        """All vertex simples ``e_v`` with multiplicity ``alpha(v)``."""
        return cls(tuple((unit(S.quiver, v), d) for v, d in zip(S.vertices, S.dims) if d))

    @classmethod
    def from_json(cls, S: QuiverSetting, raw: Mapping) -> "DecompositionType":
        try:
            return cls(tuple((as_vector(S.quiver, s["beta"]), s["mult"]) for s in raw["summands"]))
        except (KeyError, TypeError) as exc:
            raise InvalidDecomposition(f"malformed decomposition: {exc}") from exc

    def to_json(self, S: QuiverSetting) -> dict:
        return {"summands": [{"beta": dict(zip(S.vertices, b)), "mult": m}
                             for b, m in self.summands]}


def check_decomposition(S: QuiverSetting, D: DecompositionType) -> None:
    for beta, _ in D.summands:
        if len(beta) != len(S.vertices):
            raise InvalidDecomposition("summand has the wrong number of entries")
        if not any(beta) or not has_simple_reps(S.with_dims(beta)):
            raise InvalidDecomposition(f"summand {beta} admits no simple representation")
    if D.total != S.dims:
        raise InvalidDecomposition(f"summands add up to {D.total}, not {S.dims}")


def iter_decompositions(S: QuiverSetting, simples: list[tuple] | None = None, prune=None):
    """Yield every decomposition of ``alpha`` into simple dimension vectors.

    ``prune(chosen, beta, m)`` may veto extending the partial choice
    ``chosen`` (a list of ``(beta, m)``) with ``beta`` taken ``m`` times.
    """
    if simples is None:
        simples = enumerate_simple_subdimvectors(S)
    simples = sorted(simples, key=_order_key, reverse=True)
    n = len(S.dims)
    chosen: list[tuple] = []

    def rec(i, rest):
        if not any(rest):
            yield DecompositionType(tuple(chosen))
            return
        if i == len(simples):
            return
        beta = simples[i]
        mmax = min((rest[j] // beta[j] for j in range(n) if beta[j]), default=0)
        for m in range(mmax, -1, -1):
            if m and prune is not None and prune(chosen, beta, m):
                continue
            if m:
                chosen.append((beta, m))
            yield from rec(i + 1, tuple(r - m * b for r, b in zip(rest, beta)))
            if m:
                chosen.pop()

    yield from rec(0, S.dims)


def enumerate_decompositions(S: QuiverSetting, max_dim: int = MAX_DECOMPOSITION_DIM,
                             max_vertices: int = MAX_DECOMPOSITION_VERTICES) -> list[DecompositionType]:
    simples = enumerate_simple_subdimvectors(S, max_dim, max_vertices)
    found = list(iter_decompositions(S, simples))
    found.sort(key=lambda D: (D.size(), [(_order_key(b), m) for b, m in D.summands]))
    return found


@dataclass(frozen=True)
class LocalQuiverData:
    setting: QuiverSetting
    gamma: dict | None = None
    n: int | None = None
    blocks: tuple = field(default=(), compare=False)  # summand beta per local vertex

    def __post_init__(self):
        if self.gamma is not None:
            total = sum(self.gamma[v] * d for v, d in zip(self.setting.vertices, self.setting.dims))
            if self.n is None:
                object.__setattr__(self, "n", total)
            elif total != self.n:
                raise InvalidDecomposition(f"sum of gamma * alpha is {total}, expected n={self.n}")

    def loops(self) -> dict:
        return {v: self.setting.quiver.loops(v) for v in self.setting.vertices}


def local_vertex_names(k: int) -> tuple:
    return tuple(f"s{i + 1}" for i in range(k))


def local_quiver(S: QuiverSetting, D: DecompositionType, gamma: Mapping | None = None,
                 names: tuple | None = None) -> LocalQuiverData:
    """Local quiver setting at a point of type ``D``; arrows u->v number ``delta_uv - chi(b_u, b_v)``."""
    check_decomposition(S, D)
    Q = S.quiver
    betas = [b for b, _ in D.summands]
    names = names or local_vertex_names(len(betas))
    arrows = []
    for i, bu in enumerate(betas):
        for j, bv in enumerate(betas):
            count = int(i == j) - chi(Q, bu, bv)
            if count < 0:
                raise NegativeArrowCount(
                    f"{count} arrows from summand {bu} to {bv}: not simple-admitting")
            arrows.extend([(names[i], names[j])] * count)
    setting = QuiverSetting(Quiver(names, tuple(arrows)), tuple(m for _, m in D.summands))
    gamma_p = None
    n = None
    if gamma is not None:
        g = as_vector(Q, gamma)
        n = sum(x * a for x, a in zip(g, S.dims))
        gamma_p = {names[i]: sum(x * b for x, b in zip(g, bu)) for i, bu in enumerate(betas)}
    return LocalQuiverData(setting, gamma_p, n, tuple(betas))
