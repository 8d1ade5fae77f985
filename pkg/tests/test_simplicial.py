import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import random_complex, random_metric
from vrglue.errors import InvalidFiltration, UnknownLandmark, VertexClash, VRGlueError
from vrglue.metric import MetricGraph, graph_metric, new_finite_metric, sample_circle
from vrglue.simplicial import (
    OPEN,
    Filtration,
    SimplicialComplex,
    cech_ambient,
    clique_complex,
    critical_scales,
    fingerprint,
    from_simplices,
    full_simplex,
    induced,
    join,
    maximal_cliques,
    simplex,
    union_complexes,
    vietoris_rips,
    vr_filtration,
    wedge_complexes,
)


def brute_vr(m, r, strict=False, cap=None):
    out = set()
    labels = sorted(m.labels)
    top = len(labels) if cap is None else min(len(labels), cap + 1)
    for k in range(1, top + 1):
        for c in combinations(labels, k):
            d = m.diameter(c)
            if (d < r) if strict else (d <= r):
                out.add(c)
    return out


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 8), st.integers(0, 8), st.sampled_from([None, 1, 2]))
def test_vr_matches_subset_enumeration(seed, n, r, cap):
    m = random_metric(random.Random(seed), n)
    assert set(vietoris_rips(m, r, dim_cap=cap).simplices) == brute_vr(m, r, cap=cap)
    assert set(vietoris_rips(m, r, OPEN, cap).simplices) == brute_vr(m, r, True, cap)


def test_vr_small_examples():
    m = sample_circle(4, 4)
    assert vietoris_rips(m, 0).f_vector == (4,)
    assert vietoris_rips(m, 1).f_vector == (4, 4)
    assert vietoris_rips(m, 2).f_vector == (4, 6, 4, 1)
    assert vietoris_rips(m, 1, OPEN).f_vector == (4,)
    assert len(vietoris_rips(m, -1, OPEN)) == 0


def test_unknown_convention():
    with pytest.raises(VRGlueError):
        vietoris_rips(sample_circle(3, 3), 1, "half-open")


def brute_cech(landmarks, witnesses, r):
    out = set()
    for k in range(1, len(landmarks) + 1):
        for c in combinations(sorted(landmarks), k):
            if any(all(witnesses.d(w, z) <= r for z in c) for w in witnesses.labels):
                out.add(c)
    return out


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 8), st.integers(0, 6))
def test_cech_matches_brute_force(seed, n, r):
    rng = random.Random(seed)
    m = random_metric(rng, n)
    landmarks = rng.sample(list(m.labels), rng.randint(1, n))
    assert set(cech_ambient(landmarks, m, r).simplices) == brute_cech(landmarks, m, r)


def test_cech_unknown_landmark():
    with pytest.raises(UnknownLandmark):
        cech_ambient(["zz"], sample_circle(3, 3), 1)


def brute_maximal_cliques(n, adj):
    cliques = [
        c for k in range(1, n + 1) for c in combinations(range(n), k)
        if all(adj[a] >> b & 1 for a, b in combinations(c, 2))
    ]
    return sorted(c for c in cliques if not any(set(c) < set(d) for d in cliques))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10_000))
def test_maximal_cliques_oracle(n, seed):
    rng = random.Random(seed)
    adj = [0] * n
    for a, b in combinations(range(n), 2):
        if rng.random() < 0.5:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    assert maximal_cliques(adj) == brute_maximal_cliques(n, adj)


def test_fingerprint_is_order_independent():
    k1 = from_simplices([(0, 1), (1, 2), (0, 2)])
    k2 = from_simplices([(2, 1), (0, 2), (1, 0)])
    assert k1.fingerprint == k2.fingerprint
    assert k1.fingerprint != full_simplex([0, 1, 2]).fingerprint
    assert fingerprint(k1.simplices) == k1.fingerprint


def test_complex_basics():
    k = full_simplex("abcd")
    assert k.f_vector == (4, 6, 4, 1)
    assert k.maximal_simplices == (("a", "b", "c", "d"),)
    assert k.is_downward_closed()
    assert sorted(k.cofaces(("a", "b"))) == [("a", "b", "c"), ("a", "b", "c", "d"), ("a", "b", "d")]
    assert full_simplex("abcd", dim_cap=1).f_vector == (4, 6)
    assert simplex(["b", "a", "b"]) == ("a", "b")
    with pytest.raises(VRGlueError):
        simplex([])


def test_clique_complex_fills_hollow_triangle():
    hollow = from_simplices([(0, 1), (1, 2), (0, 2)])
    assert clique_complex(hollow).f_vector == (3, 3, 1)


def test_wedge_union_join_induced():
    a = from_simplices([("a", "b")])
    b = from_simplices([("c", "d")])
    w = wedge_complexes(a, "a", b, "c")
    assert w.vertices == {"a", "b", "d"}
    with pytest.raises(VertexClash):
        wedge_complexes(a, "a", from_simplices([("b", "x")]), "x")
    assert union_complexes(a, b).f_vector == (4, 2)
    assert join(a, b) == full_simplex("abcd")
    with pytest.raises(VertexClash):
        join(a, a)
    assert induced(full_simplex("abc"), "ab") == full_simplex("ab")


def test_filtration_validation():
    good = Filtration(((("a",), 0), (("b",), 0), (("a", "b"), 1)))
    good.validate()
    with pytest.raises(InvalidFiltration):
        Filtration(((("a", "b"), 1), (("a",), 0), (("b",), 0))).validate()
    with pytest.raises(InvalidFiltration):
        Filtration(((("a",), 1), (("b",), 0))).validate()
    with pytest.raises(InvalidFiltration):
        Filtration(((("a",), 0), (("a",), 0))).validate()


def test_vr_filtration_levels_match_vr():
    m = graph_metric(MetricGraph.from_edges([(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 3)]))
    f = vr_filtration(m, 2)
    f.validate()
    for r in critical_scales(m):
        assert f.complex_at(r) == vietoris_rips(m, r, dim_cap=2)
    assert critical_scales(m) == [0, 1, 2, 3]


def test_dim_cap_propagates():
    k = random_complex(random.Random(1), range(6), 3, 4)
    assert vietoris_rips(new_finite_metric([0], [[0]]), 0, dim_cap=0).f_vector == (1,)
    assert all(len(s) <= 5 for s in k.simplices)
