import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import random_complex, random_metric, random_tree_edges
from vrglue.errors import DimensionCapTooLow, InvalidFiltration
from vrglue.homology import (
    betti,
    cycle_diagram,
    diagrams_equal,
    make_diagram,
    merge_diagrams,
    persistence,
    predicted_diagram,
    vr_persistence,
)
from vrglue.metric import MetricGraph, graph_metric, sample_circle, wedge_metric
from vrglue.simplicial import Filtration, critical_scales, facets, from_simplices, full_simplex, vietoris_rips

INF = math.inf


def gf2_rank(m: np.ndarray) -> int:
    m = m.copy() % 2
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def dense_betti(k, cap):
    groups = k.by_dimension()
    groups += [[] for _ in range(cap + 2 - len(groups))]
    ranks = [0] * (cap + 3)
    for d in range(1, cap + 2):
        rows, cols = groups[d - 1], groups[d]
        if not rows or not cols:
            continue
        idx = {s: i for i, s in enumerate(rows)}
        mat = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for j, s in enumerate(cols):
            for f in facets(s):
                mat[idx[f], j] = 1
        ranks[d] = gf2_rank(mat)
    return tuple(len(groups[d]) - ranks[d] - ranks[d + 1] for d in range(cap + 1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 9), st.integers(0, 3))
def test_betti_matches_dense_rank_oracle(seed, n, cap):
    k = random_complex(random.Random(seed), range(n), random.Random(seed).randint(0, 6), 5)
    assert betti(k, cap) == dense_betti(k, cap)


def test_betti_examples():
    assert betti(full_simplex("abcde"), 3) == (1, 0, 0, 0)
    hollow = from_simplices([(0, 1), (1, 2), (0, 2)])
    assert betti(hollow, 1) == (1, 1)
    two = from_simplices([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert betti(two, 1) == (1, 2)
    assert betti(from_simplices([(0,), (1,)]), 0) == (2,)
    assert betti(hollow, -1) == ()


def test_betti_refuses_truncated_complex():
    k = vietoris_rips(sample_circle(4, 4), 2, dim_cap=1)
    with pytest.raises(DimensionCapTooLow):
        betti(k, 1)
    assert betti(k, 0) == (1,)


@pytest.mark.parametrize(
    "n, r, expected",
    [
        (4, 1, (1, 1)),
        (8, 1, (1, 1, 0, 0)),
        (8, 3, (1, 0, 0, 1)),
        (9, 3, (1, 0, 2)),
        (12, 4, (1, 0, 3)),
        (12, 2, (1, 1, 0)),
    ],
)
def test_circle_samples_match_known_spheres(n, r, expected):
    k = vietoris_rips(sample_circle(n, n), r, dim_cap=len(expected))
    assert betti(k, len(expected) - 1) == expected


def test_persistence_of_square_and_c12():
    d = vr_persistence(sample_circle(4, 4), 1)
    assert d.dim(0) == [(0, 1)] * 3 + [(0, INF)]
    assert d.dim(1) == [(1, 2)]
    assert vr_persistence(sample_circle(12, 12), 1).dim(1) == [(1, 4)]


def test_tree_persistence_is_trivial_above_dimension_zero():
    g = MetricGraph.from_edges(random_tree_edges(random.Random(2), 8))
    d = vr_persistence(graph_metric(g), 2)
    assert d.dim(1) == [] and d.dim(2) == []
    assert d.dim(0) == [(0, 1)] * 7 + [(0, INF)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 7))
def test_persistence_counts_match_betti_at_each_scale(seed, n):
    m = random_metric(random.Random(seed), n)
    d = vr_persistence(m, 1)
    for r in critical_scales(m):
        alive = tuple(
            sum(1 for b, dth in d.dim(i) if b <= r < dth) for i in range(2)
        )
        assert alive == betti(vietoris_rips(m, r, dim_cap=2), 1)


def test_persistence_validates_filtration():
    with pytest.raises(InvalidFiltration):
        persistence(Filtration(((("a", "b"), 0), (("a",), 0), (("b",), 0))), 1)


def test_diagrams_equal_examples():
    a = make_diagram({1: [(0, 1)]})
    b = make_diagram({1: [(0, 1.2)]})
    assert diagrams_equal(a, a)
    cmp = diagrams_equal(a, b, tol=0.1)
    assert not cmp and cmp.witness == (1, (0, 1), (0, 1.2))
    assert diagrams_equal(a, b, tol=0.25)
    assert not diagrams_equal(a, make_diagram({1: [(0, 1), (2, 3)]}))
    assert not diagrams_equal(make_diagram({0: [(0, INF)]}), make_diagram({0: [(0, 5)]}), tol=10)


def test_wedge_of_circles_diagram_is_the_union():
    x = sample_circle(5, 5, labels=[f"x{i}" for i in range(5)])
    y = sample_circle(6, 6, labels=[f"y{i}" for i in range(6)])
    w = wedge_metric(x, "x0", y, "y0")
    got = vr_persistence(w, 2).restrict(1)
    want = merge_diagrams(vr_persistence(x, 2).restrict(1), vr_persistence(y, 2).restrict(1))
    assert diagrams_equal(got, want)


def test_predicted_diagram_for_plain_pairs():
    d = predicted_diagram([(4, 0), (6, 0)])
    assert d.dim(0) == [(0, INF)]
    assert d.dim(1) == sorted(cycle_diagram(4).dim(1) + cycle_diagram(6).dim(1))
    assert predicted_diagram([]).dims() == [0]


def test_diagram_serialisation():
    d = make_diagram({0: [(0, INF)], 1: [(1, 2)]})
    assert d.to_list() == [{"dim": 0, "points": [[0, "inf"]]}, {"dim": 1, "points": [[1, 2]]}]
