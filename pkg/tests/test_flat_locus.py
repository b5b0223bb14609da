import itertools
import random

import pytest

from qbs.catalog import reduced_catalog
from qbs.errors import NotReduced
from qbs.flat_locus import (
    AZUMAYA,
    FLAT_NON_AZUMAYA,
    NON_FLAT,
    classify_point,
    cycle_sum_cycles,
    flat_non_azumaya_decompositions,
    is_flat_local_setting,
    singular_shape_check,
    singular_shape_check_bruteforce,
)
from qbs.quiver_core import chi
from qbs.rep_theory import DecompositionType, enumerate_decompositions, local_quiver

from conftest import build, cyc


def test_flat_examples():
    assert is_flat_local_setting(build({v: 1 for v in "abcde"}, cyc(*"abcde"))) == (True, ["cyclic"])
    s = build({"x": 1, "a": 1, "b": 1, "c": 1}, cyc("x", "a") + cyc("x", "b", "c"))
    assert is_flat_local_setting(s) == (True, ["cyclic", "cyclic"])


def test_flat_families_with_d():
    two_path = build({"c": 1, "u1": 3, "l1": 3, "l2": 2},
                     [("c", "u1"), ("u1", "l1"), ("l1", "c"), ("l1", "l2"), ("l2", "u1")])
    assert is_flat_local_setting(two_path) == (True, ["two-path"])
    d_cycle = build({"c": 1, "x": 3, "y": 3, "z": 3},
                    [("c", "x"), ("x", "c"), ("x", "y"), ("y", "z"), ("z", "x")])
    assert is_flat_local_setting(d_cycle) == (True, ["d-cycle"])
    d1_cycle = d_cycle.with_dims((1, 3, 2, 2))
    assert is_flat_local_setting(d1_cycle) == (True, ["d-1-cycle"])
    assert not is_flat_local_setting(d_cycle.with_dims((1, 3, 2, 3)))[0]
    digons = build({"a": 2, "c": 2, "b": 2}, [("a", "c"), ("c", "a"), ("c", "b"), ("b", "c")])
    assert is_flat_local_setting(digons) == (True, ["double-cycle-2"])


def test_two_loop_vertex_flatness():
    # dimension 2 with two loops is the 2*1 sum of two A~0; three loops is not flat
    assert is_flat_local_setting(build({"a": 2}, [("a", "a")] * 2))[0]
    assert not is_flat_local_setting(build({"a": 2}, [("a", "a")] * 3))[0]
    assert not is_flat_local_setting(build({"a": 3}, [("a", "a")] * 2))[0]


def test_loops_at_dimension_one_ignored():
    s = build({"a": 1, "b": 1}, cyc("a", "b") + [("a", "a"), ("a", "a")])
    assert is_flat_local_setting(s)[0]
    assert cycle_sum_cycles(s) == [[0, 1]]


def test_classify_azumaya():
    S = build({"a": 2, "b": 2}, [("a", "b")] * 2 + [("b", "a")] * 2)
    pc = classify_point(S, {"a": 1, "b": 1}, DecompositionType.trivial(S))
    assert pc.kind == AZUMAYA and pc.fiber_dim == 3


def test_classify_artin_point():
    S = build({"a": 1, "b": 1}, cyc("a", "b"))
    pc = classify_point(S, {"a": 1, "b": 1}, DecompositionType.finest(S))
    assert pc.kind == FLAT_NON_AZUMAYA and pc.fiber_dim == 1


def test_classify_non_flat():
    S = build({"a": 2}, [("a", "a")] * 3)
    pc = classify_point(S, {"a": 1}, DecompositionType((((1,), 2),)))
    assert pc.local.setting.dims == (2,) and pc.local.loops() == {"s1": 3}
    assert pc.kind == NON_FLAT and pc.fiber_dim is None


def test_classify_json():
    S = build({"a": 1, "b": 1}, cyc("a", "b"))
    data = classify_point(S, {"a": 1, "b": 1}, DecompositionType.finest(S)).to_json()
    assert set(data) == {"kind", "local", "fiber_dim", "family"}
    assert data["local"]["n"] == 2


def test_flat_points_have_expected_fiber_dim():
    for S in itertools.islice(reduced_catalog(4, 2, 7), 300):
        for D in enumerate_decompositions(S):
            pc = classify_point(S, {v: 1 for v in S.vertices}, D)
            if pc.kind != NON_FLAT:
                assert pc.fiber_dim == pc.local.n - 1


def test_shape_check_worked_example(fixture_setting):
    S, _ = fixture_setting("sec4_example")
    ok, w = singular_shape_check(S)
    assert ok and len(w.blobs) == 5 and len(w.cycles) == 2


def test_literal_variant_is_not_reduced(fixture_setting):
    S, _ = fixture_setting("sec4_example_literal")
    with pytest.raises(NotReduced):
        singular_shape_check(S)


def test_shape_check_examples():
    S = build({"a": 2, "b": 2}, [("a", "b")] * 2 + [("b", "a")] * 2)
    assert singular_shape_check(S) == (False, None)
    pair = build({"p": 1, "q": 1, "r": 1, "s": 1},
                 [("p", "q")] * 2 + [("q", "p")] * 2 + [("r", "s")] * 2 + [("s", "r")] * 2
                 + [("q", "r"), ("s", "p")])
    ok, w = singular_shape_check(pair)
    assert ok and len(w.cycles) == 1 and len(w.blobs) == 2


def test_witness_local_quiver_loops():
    pair = build({"p": 1, "q": 1, "r": 1, "s": 1},
                 [("p", "q")] * 2 + [("q", "p")] * 2 + [("r", "s")] * 2 + [("s", "r")] * 2
                 + [("q", "r"), ("s", "p")])
    _, w = singular_shape_check(pair)
    D = w.decomposition(pair)
    L = local_quiver(pair, D)
    assert cycle_sum_cycles(L.setting) is not None
    for name, beta in zip(L.setting.vertices, L.blocks):
        assert L.loops()[name] == 1 - chi(pair.quiver, beta, beta)


def test_shape_search_matches_partition_search():
    rng = random.Random(2)
    cat = list(reduced_catalog(4, 2, 8))
    sample = rng.sample(cat, 250) + [S for S in cat if singular_shape_check(S)[0]]
    for S in sample:
        fast, wf = singular_shape_check(S)
        slow, ws = singular_shape_check_bruteforce(S)
        assert fast == slow, S
        if fast:
            assert len(wf.blobs) == len(ws.blobs)


def test_pruned_flat_search_is_sound():
    rng = random.Random(4)
    cat = list(reduced_catalog(4, 3, 8))
    for S in rng.sample(cat, 150):
        pruned = {D for D, _ in flat_non_azumaya_decompositions(S)}
        full = {D for D, _ in flat_non_azumaya_decompositions(S, prune=False)}
        assert pruned == full, S
