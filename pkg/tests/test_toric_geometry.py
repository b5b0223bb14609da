import itertools
import math
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qbs.catalog import cycle_sums
from qbs.errors import UnverifiedFan, VerificationFailure
from qbs.fiber_model import nullcone_components
from qbs.oracles import connecting_subquivers_bruteforce, minimal_elements
from qbs.quiver_core import Quiver
from qbs.rep_theory import LocalQuiverData
from qbs.toric_geometry import (
    betti_numbers,
    build_fan,
    cohomology_presentation,
    connecting_count,
    connecting_subquivers,
    extend,
    full_betti,
    minimal_connecting_subquivers,
    nonnegative_representative,
    toric_model,
    verify_fan,
)

from conftest import build, cyc

PATH = Quiver(("a", "b"), (("a", "b"),))
STAR = Quiver(("a", "b", "c"), (("a", "c"), ("b", "c")))


def fan_of(tree, gamma):
    F = build_fan(extend(tree, gamma))
    verify_fan(F)
    return F


def test_extend():
    E = extend(PATH, {"a": 1, "b": 2})
    assert E.source == "v0" and E.n == 3
    assert E.quiver.arrows == (("a", "b"), ("v0", "a"), ("v0", "b"), ("v0", "b"))
    assert E.theta == {"v0": -3, "a": 1, "b": 2}
    assert E.rank == 2
    clash = extend(Quiver(("v0",), ()), {"v0": 2})
    assert clash.source != "v0"


def test_connecting_counts_against_bruteforce():
    for tree, gamma in [(PATH, {"a": 1, "b": 1}), (STAR, {"a": 1, "b": 2, "c": 1}),
                        (PATH, {"a": 3, "b": 2})]:
        E = extend(tree, gamma)
        fast = connecting_subquivers(E)
        slow = connecting_subquivers_bruteforce(E.quiver, E.source)
        assert set(fast) == set(slow) and len(fast) == connecting_count(E)
        assert set(minimal_connecting_subquivers(E)) == set(minimal_elements(slow))


def test_artin_count():
    E = extend(PATH, {"a": 1, "b": 1})
    assert connecting_count(E) == 3
    assert len(minimal_connecting_subquivers(E)) == 2


def test_projective_line():
    F = fan_of(PATH, {"a": 1, "b": 1})
    assert F.rank == 1
    assert sorted(F.rays.values()) == [(-1,), (1,)]
    assert betti_numbers(F) == [1, 1] and full_betti(F) == [1, 0, 1]


def test_projective_plane():
    F = fan_of(STAR, {"a": 1, "b": 1, "c": 1})
    assert F.rank == 2 and len(F.max_cones) == 3
    assert sorted(F.rays.values()) == [(-1, -1), (0, 1), (1, 0)]
    assert betti_numbers(F) == [1, 1, 1]


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_parallel_arrows_give_projective_space(d):
    F = fan_of(Quiver(("a",), ()), {"a": d})
    assert F.rank == d - 1 and len(F.max_cones) == d
    assert betti_numbers(F) == [1] * d


def test_negative_control():
    F = build_fan(extend(STAR, {"a": 1, "b": 1, "c": 1}))
    k = next(iter(F.rays))
    F.rays[k] = tuple(2 * x for x in F.rays[k])
    with pytest.raises(VerificationFailure):
        verify_fan(F)
    F2 = build_fan(extend(STAR, {"a": 1, "b": 1, "c": 1}))
    F2.max_cones = F2.max_cones[:-1]
    with pytest.raises(VerificationFailure):
        verify_fan(F2)


def test_betti_needs_verification():
    with pytest.raises(UnverifiedFan):
        betti_numbers(build_fan(extend(PATH, {"a": 1, "b": 1})))


def test_cohomology_artin():
    C = cohomology_presentation(extend(PATH, {"a": 1, "b": 1}))
    assert str(C) == "Z[D_b]/(D_b^2)"
    assert C.betti == (1, 1) and C.rank == 2


def test_cohomology_star():
    C = cohomology_presentation(extend(STAR, {"a": 1, "b": 1, "c": 1}))
    assert str(C) == "Z[D_c]/(D_c^3)"


def trees(max_vertices=4, max_gamma=2):
    for S, _ in cycle_sums(3, 3, 1, max_vertices=max_vertices):
        for gs in itertools.product(range(1, max_gamma + 1), repeat=len(S.vertices)):
            L = LocalQuiverData(S, dict(zip(S.vertices, gs)))
            yield from nullcone_components(L)


def test_cohomology_counts():
    for T in trees():
        E = extend(T, T.gamma, T.n)
        C = cohomology_presentation(E)
        multi = [w for w in T.tree.vertices if E.indegree(w) >= 2]
        assert len(C.relations) == len(multi)
        F = build_fan(E)
        verify_fan(F)
        assert C.rank == sum(betti_numbers(F)) == len(F.max_cones)
        assert list(C.betti) == betti_numbers(F)


def quotient_dimension(C):
    gens = [sympy.Symbol(f"D_{g}") for g in C.generators]
    sym = dict(zip(C.generators, gens))
    polys = [sympy.Mul(*[sum(c * sym[g] for g, c in f.items()) for f in rel]) for rel in C.relations]
    G = sympy.groebner(polys, *gens, order="grevlex")
    lead = [sympy.Poly(p, *gens).monoms(order="grevlex")[0] for p in G.exprs]
    top = sum(len(rel) for rel in C.relations)
    count = 0
    for exps in itertools.product(range(top + 1), repeat=len(gens)):
        if not any(all(e >= m for e, m in zip(exps, l)) for l in lead):
            count += 1
    return count


def test_cohomology_rank_by_groebner():
    rng = random.Random(1)
    sample = rng.sample(list(trees(4, 2)), 25)
    for T in sample:
        C = cohomology_presentation(extend(T, T.gamma, T.n))
        if C.generators:
            assert quotient_dimension(C) == C.rank


def test_poset_anti_isomorphism():
    for T in trees(4, 2):
        E = extend(T, T.gamma, T.n)
        m = len(E.quiver.arrows)
        if m > 14:
            continue
        F = build_fan(E)
        subs = connecting_subquivers_bruteforce(E.quiver, E.source)
        cones = {s: frozenset(F.cone_of(s, m)) for s in subs}
        assert len(set(cones.values())) == len(subs)
        for s1, s2 in itertools.product(subs, repeat=2):
            assert (s1 <= s2) == (cones[s2] <= cones[s1])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_nonnegative_representative(data):
    E = extend(STAR, {"a": 1, "b": 2, "c": 1})
    m = len(E.quiver.arrows)
    lam = data.draw(st.lists(st.integers(-4, 4), min_size=m, max_size=m))
    out = nonnegative_representative(E, lam)
    assert all(x >= 0 for x in out)
    # the shift is a coboundary: diff(a) = c(head) - c(tail) for a vertex function c
    diff = [o - l for o, l in zip(out, lam)]
    c = {E.source: 0}
    while len(c) < len(E.quiver.vertices):
        for a, (t, h) in enumerate(E.quiver.arrows):
            if t in c and h not in c:
                c[h] = c[t] + diff[a]
            elif h in c and t not in c:
                c[t] = c[h] - diff[a]
    assert all(diff[a] == c[h] - c[t] for a, (t, h) in enumerate(E.quiver.arrows))


def test_toric_model_json():
    T = nullcone_components(LocalQuiverData(build({"a": 1, "b": 1}, cyc("a", "b")), {"a": 1, "b": 1}))[0]
    data = toric_model(T).to_json()
    assert data["rank"] == 1 and data["betti"] == [1, 1] and data["betti_full"] == [1, 0, 1]
