import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import lemma_instance, random_chordal_edges, random_complex, random_tree_edges
from vrglue.collapse import (
    CollapseCertificate,
    CollapseStep,
    apply_collapse,
    dismantle,
    free_face_check,
    gen39_complex,
    gen39_sequence,
    greedy_collapse,
    is_collapsible,
    is_dominated,
    lemma39_complex,
    lemma39_sequence,
    twoplusplus_complex,
    twoplusplus_sequence,
)
from vrglue.errors import (
    HypothesisViolation,
    NotAFreeFace,
    SigmaNotCollapsible,
    SimplexNotInComplex,
    VRGlueError,
)
from vrglue.metric import MetricGraph, graph_metric
from vrglue.replay import digest, replay
from vrglue.simplicial import from_simplices, full_simplex, vietoris_rips

TRI = full_simplex("abc")
HOLLOW = from_simplices([("a", "b"), ("b", "c"), ("a", "c")])


def test_free_face_examples():
    assert free_face_check(TRI, ("a", "b")) == ("a", "b", "c")
    two = from_simplices([("a", "b", "c"), ("a", "b", "d")])
    assert free_face_check(two, ("a", "b")) is None
    assert free_face_check(HOLLOW, ("a",)) is None
    assert free_face_check(TRI, ("a", "b", "c")) is None
    with pytest.raises(SimplexNotInComplex):
        free_face_check(TRI, ("a", "z"))


def test_free_vertex_of_a_simplex_is_non_elementary():
    assert free_face_check(full_simplex("abcd"), ("a",)) == ("a", "b", "c", "d")


def test_apply_collapse_examples():
    assert apply_collapse(TRI, ("a", "b"), ("a", "b", "c")) == from_simplices([("a", "c"), ("b", "c")])
    star_gone = apply_collapse(full_simplex("abcd"), ("a",), ("a", "b", "c", "d"))
    assert star_gone == full_simplex("bcd")
    with pytest.raises(NotAFreeFace):
        apply_collapse(HOLLOW, ("a",), ("a", "b"))


def test_step_must_be_proper_face():
    with pytest.raises(VRGlueError):
        CollapseStep(("a", "b"), ("a", "b"))
    assert not CollapseStep(("a",), ("a", "b", "c")).elementary


def test_greedy_examples():
    core, cert = greedy_collapse(full_simplex("abcd"))
    assert len(core) == 1 and replay(full_simplex("abcd").simplices, cert).ok
    core, cert = greedy_collapse(HOLLOW)
    assert core == HOLLOW and len(cert) == 0


@pytest.mark.parametrize("seed", range(5))
def test_tree_vr_collapses(seed):
    rng = random.Random(seed)
    g = MetricGraph.from_edges(random_tree_edges(rng, 9))
    assert is_collapsible(vietoris_rips(graph_metric(g), 1))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_greedy_core_has_no_free_face_and_certificate_replays(seed):
    rng = random.Random(seed)
    k = random_complex(rng, range(rng.randint(1, 7)), rng.randint(0, 5), 4)
    core, cert = greedy_collapse(k)
    assert all(free_face_check(core, t) is None for t in core.simplices)
    res = replay(k.simplices, cert, expect_final=core.simplices)
    assert res.ok, res.reason
    assert cert.final_fingerprint == digest(core.simplices)
    assert len(core) <= len(k)


def test_replay_rejects_tampering():
    k = full_simplex("abc")
    _, cert = greedy_collapse(k)
    bogus_step = CollapseCertificate((CollapseStep(("a",), ("a", "b")),) + cert.steps)
    assert not replay(k.simplices, bogus_step).ok
    missing = CollapseCertificate((CollapseStep(("a", "z"), ("a", "b", "z")),))
    assert "missing" in replay(k.simplices, missing).reason
    wrong_fp = CollapseCertificate(cert.steps, "0" * 64, cert.final_fingerprint)
    assert replay(k.simplices, wrong_fp).reason == "initial fingerprint mismatch"
    assert not replay({("a", "b")}, ()).ok  # not downward closed
    assert not replay(k.simplices, cert, expect_final={("z",)}).ok


def test_digest_matches_library_fingerprint():
    k = random_complex(random.Random(7), "abcdefg", 4, 4)
    assert digest(k.simplices) == k.fingerprint


# --------------------------------------------------------------- lemma builders


def test_lemma39_empty_family():
    cert = lemma39_sequence(TRI, "a", [])
    assert len(cert) == 0 and cert.initial_fingerprint == cert.final_fingerprint


def test_gen39_cone_over_edge():
    l = full_simplex("ab")
    k = gen39_complex(l, ("a", "b"), [("c",)])
    assert k == full_simplex("abc")
    cert = gen39_sequence(l, ("a", "b"), [("c",)])
    assert replay(k.simplices, cert, expect_final=l.simplices).ok


def test_gen39_with_vertex_equals_lemma39():
    rng = random.Random(3)
    l, a, t = lemma_instance(rng, "lemma39")
    assert gen39_sequence(l, (a,), t) == lemma39_sequence(l, a, t)
    assert gen39_complex(l, (a,), t) == lemma39_complex(l, a, t)


def test_twoplusplus_path_sigma():
    sigma = from_simplices([("p", "q"), ("q", "s")])
    l = sigma
    cert = twoplusplus_sequence(l, sigma, [("u",)])
    _, sigma_cert = greedy_collapse(sigma)
    assert len(cert) == len(sigma_cert) + 1
    k = twoplusplus_complex(l, sigma, [("u",)])
    assert replay(k.simplices, cert, expect_final=l.simplices).ok


def test_twoplusplus_single_vertex_matches_lemma39():
    l = from_simplices([("a", "b")])
    t = [("b",)]
    with pytest.raises(HypothesisViolation):
        twoplusplus_sequence(l, from_simplices([("a",)]), t)
    l = from_simplices([("a",), ("x",)])
    cert = twoplusplus_sequence(l, from_simplices([("a",)]), [("y",)])
    assert cert.steps == lemma39_sequence(l, "a", [("y",)]).steps


def test_hypothesis_violations():
    with pytest.raises(HypothesisViolation):
        lemma39_sequence(TRI, "z", [("q",)])
    with pytest.raises(HypothesisViolation):
        lemma39_sequence(TRI, "a", [("a", "q")])
    with pytest.raises(HypothesisViolation):
        lemma39_sequence(TRI, "a", [("b",)])  # already in L
    # the edge {x, y} needs a + x and a + y in L
    with pytest.raises(HypothesisViolation):
        lemma39_sequence(from_simplices([("a",)]), "a", [("x", "y")])
    with pytest.raises(SigmaNotCollapsible):
        twoplusplus_sequence(HOLLOW, HOLLOW, [("z",)])


@pytest.mark.parametrize("kind", ["lemma39", "gen39", "twoplusplus"])
@pytest.mark.parametrize("seed", range(15))
def test_random_lemma_instances_replay(kind, seed):
    l, base, t = lemma_instance(random.Random(seed * 31 + len(kind)), kind)
    if kind == "lemma39":
        k, cert = lemma39_complex(l, base, t), lemma39_sequence(l, base, t)
    elif kind == "gen39":
        k, cert = gen39_complex(l, base, t), gen39_sequence(l, base, t)
    else:
        k, cert = twoplusplus_complex(l, base, t), twoplusplus_sequence(l, base, t)
    res = replay(k.simplices, cert, expect_final=l.simplices)
    assert res.ok, res.reason
    no_fp = replay(k.simplices, cert.steps, expect_final=l.simplices)
    assert no_fp.ok


# ---------------------------------------------------------------- dismantling


def cycle(n):
    return MetricGraph.from_edges([(i, (i + 1) % n) for i in range(n)])


def test_dismantle_examples():
    assert dismantle(cycle(4)) is None
    assert dismantle(cycle(3)) is not None
    assert len(dismantle(MetricGraph.from_edges(random_tree_edges(random.Random(0), 8)))) == 7
    assert not is_dominated(cycle(4), 0, 1)
    assert is_dominated(cycle(3), 0, 1)
    with pytest.raises(VRGlueError):
        is_dominated(cycle(3), 0, 0)


def test_dismantle_accepts_plain_adjacency():
    assert dismantle({0: {1}, 1: {0, 2}, 2: {1}}) is not None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 9), st.sampled_from([1, 2]))
def test_dismantlable_graphs_have_collapsible_vr(seed, n, r):
    g = MetricGraph.from_edges(random_chordal_edges(random.Random(seed), n))
    assert dismantle(g) is not None
    assert is_collapsible(vietoris_rips(graph_metric(g), r))
