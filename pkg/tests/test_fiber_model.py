import math

import pytest
from hypothesis import given, settings, strategies as st

from qbs.catalog import cycle_sums
from qbs.errors import NonPositiveGamma, NotARoot, UnsupportedFamily
from qbs.fiber_model import (
    compute_Nw,
    component_fiber,
    fiber_description,
    gamma_graph,
    nullcone_components,
)
from qbs.oracles import nullcone_component_count_bruteforce
from qbs.quiver_core import Quiver
from qbs.rep_theory import LocalQuiverData
from qbs.toric_geometry import toric_model

from conftest import build, cyc


def local(S, gamma=None):
    return LocalQuiverData(S, gamma or {v: 1 for v in S.vertices})


def test_component_counts():
    assert len(nullcone_components(local(build({"a": 1, "b": 1}, cyc("a", "b"))))) == 2
    assert len(nullcone_components(local(build({"a": 1, "b": 1, "c": 1}, cyc("a", "b", "c"))))) == 3
    two = build({"a": 1, "c": 1, "b": 1}, cyc("a", "c") + cyc("c", "b"))
    assert len(nullcone_components(local(two))) == 4


def test_loops_do_not_change_components():
    S = build({"a": 1, "b": 1}, cyc("a", "b") + [("a", "a")] * 3)
    comps = nullcone_components(local(S))
    assert len(comps) == 2
    assert all(len(T.tree.arrows) == 1 for T in comps)


def test_compute_Nw():
    star = Quiver(("a", "b", "c"), (("a", "c"), ("b", "c")))
    assert compute_Nw(star, {"a": 1, "b": 1, "c": 1}) == {"a": 0, "b": 0, "c": 2}
    assert compute_Nw(star, {"a": 2, "b": 1, "c": 2}) == {"a": 1, "b": 0, "c": 4}
    path = Quiver(("u", "v", "w"), (("u", "v"), ("v", "w")))
    assert compute_Nw(path, {"u": 1, "v": 1, "w": 1}) == {"u": 0, "v": 1, "w": 2}
    with pytest.raises(NonPositiveGamma):
        compute_Nw(path, {"u": 0, "v": 1, "w": 1})
    with pytest.raises(NonPositiveGamma):
        compute_Nw(path, {"u": 1, "v": 1, "w": 1}, n=4)


def test_gamma_graph_two_roots():
    S = build({"a": 1, "c": 1, "b": 1}, cyc("a", "c") + cyc("c", "b"))
    comps = nullcone_components(local(S))
    T = next(T for T in comps if len(T.roots) == 2)
    assert set(T.roots) == {"a", "b"}
    g = gamma_graph(T, "a")
    assert g.spaces == {"a": 1, "c": 0}
    assert g.height == 1 and g.layers == (("a",), ("c",))
    assert [b.label for b in g.blocks["a"]][0] == "free"
    with pytest.raises(NotARoot):
        gamma_graph(T, "c")
    fib = component_fiber(T)
    assert len(fib.overlaps) == 1 and fib.overlaps[0].meet == "c"
    assert fib.dimension == 2


def test_gamma_override():
    S = build({"a": 1, "b": 1}, cyc("a", "b"))
    T = nullcone_components(local(S))[0]
    root = T.roots[0]
    g = gamma_graph(T, root, {"a": 2, "b": 3})
    assert g.dimension == 4


def test_blocks_partition_coordinates():
    for S, _ in cycle_sums(3, 3, 0, max_vertices=5):
        gamma = {v: 1 + i % 3 for i, v in enumerate(S.vertices)}
        for T in nullcone_components(local(S, gamma)):
            for r in T.roots:
                g = gamma_graph(T, r)
                for w in g.vertices:
                    bl = g.blocks[w]
                    assert bl[0].first == 1 and bl[-1].last == g.spaces[w] + 1
                    assert all(x.last + 1 == y.first for x, y in zip(bl, bl[1:]))
                    assert all(b.size == g.spaces[b.source] + 1 for b in bl if b.source is not None)


def test_description_dimension_matches_toric_rank():
    for S, lengths in cycle_sums(2, 3, 1):
        L = local(S)
        fd = fiber_description(L)
        assert fd.dimension == L.n - 1
        assert len(fd.components) == math.prod(k + 1 for k in lengths)
        for c in fd.components:
            assert c.dimension == toric_model(c.component).fan.rank == L.n - 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=2, max_size=5))
def test_dimension_with_random_gamma(gs):
    names = [f"v{i}" for i in range(len(gs))]
    S = build({v: 1 for v in names}, cyc(*names))
    L = LocalQuiverData(S, dict(zip(names, gs)))
    assert fiber_description(L).dimension == sum(gs) - 1


def test_component_count_oracle():
    for S, lengths in cycle_sums(3, 2, 1):
        assert nullcone_component_count_bruteforce(S) == math.prod(k + 1 for k in lengths)


def test_unsupported_family():
    S = build({"a": 1, "b": 1}, [("a", "b")] * 2 + [("b", "a")])
    with pytest.raises(UnsupportedFamily):
        fiber_description(local(S))
    S2 = build({"a": 2, "b": 1}, cyc("a", "b"))
    with pytest.raises(UnsupportedFamily):
        nullcone_components(LocalQuiverData(S2, {"a": 1, "b": 1}))


def test_json_shape():
    S = build({"a": 1, "b": 1}, cyc("a", "b"))
    data = fiber_description(local(S)).to_json()
    assert data["n"] == 2 and data["dimension"] == 1 and len(data["components"]) == 2
