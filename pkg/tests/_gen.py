"""Random instance generators shared by the tests."""
from __future__ import annotations

import random
from itertools import combinations

from vrglue.collapse import greedy_collapse
from vrglue.metric import MetricGraph, graph_metric, new_finite_metric
from vrglue.simplicial import SimplicialComplex, from_simplices, simplex


def random_connected_graph(rng: random.Random, n: int, extra: float = 0.3, max_w: int = 4, labels=None):
    labels = list(range(n)) if labels is None else list(labels)
    edges = {}
    for i in range(1, n):
        j = rng.randrange(i)
        edges[(labels[j], labels[i])] = rng.randint(1, max_w)
    for i, j in combinations(range(n), 2):
        if (labels[i], labels[j]) not in edges and rng.random() < extra:
            edges[(labels[i], labels[j])] = rng.randint(1, max_w)
    return MetricGraph.from_edges([(u, v, w) for (u, v), w in edges.items()], vertices=labels)


def random_metric(rng: random.Random, n: int, labels=None):
    """Shortest-path metric of a random connected integer-weighted graph."""
    if n == 1:
        return new_finite_metric(labels or [0], [[0]])
    return graph_metric(random_connected_graph(rng, n, labels=labels))


def random_complex(rng: random.Random, vertices, n_tops: int, max_size: int) -> SimplicialComplex:
    vertices = list(vertices)
    tops = []
    for _ in range(n_tops):
        k = rng.randint(1, min(max_size, len(vertices)))
        tops.append(rng.sample(vertices, k))
    tops += [[v] for v in vertices]
    return from_simplices(tops)


def random_subcomplex(rng: random.Random, k: SimplicialComplex, keep: float = 0.5) -> SimplicialComplex:
    """Drop a random up-closed family of simplices."""
    drop = set()
    for s in sorted(k.simplices, key=len):
        if rng.random() > keep:
            drop.add(s)
    out = {s for s in k.simplices if not any(set(d) <= set(s) for d in drop)}
    return SimplicialComplex(frozenset(out))


def random_tree_edges(rng: random.Random, n: int):
    return [(rng.randrange(i), i) for i in range(1, n)]


def random_chordal_edges(rng: random.Random, n: int):
    """Each new vertex joins a clique of the graph so far (keeps chordality)."""
    adj = {0: set()}
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        clique = [u]
        for w in rng.sample(sorted(adj[u]), len(adj[u])):
            if all(w in adj[c] for c in clique) and rng.random() < 0.6:
                clique.append(w)
        adj[v] = set()
        for c in clique:
            adj[v].add(c)
            adj[c].add(v)
            edges.append((c, v))
    return edges


def lemma_instance(rng: random.Random, kind: str):
    """Random ``(L, base, T)`` satisfying the hypotheses of one collapse lemma.

    ``base`` is an apex vertex, a simplex, or a collapsible complex.  The
    construction takes a complex P on fresh vertices and a subcomplex Q,
    puts ``T = P \\ Q``, and lets L contain ``base * Q`` plus a random
    complex R that avoids every member of T.
    """
    nv = rng.randint(2, 5)
    verts = [f"v{i}" for i in range(nv)]
    t = []
    while not t:
        p = random_complex(rng, verts, rng.randint(1, 4), 3)
        q = random_subcomplex(rng, p, rng.uniform(0.3, 0.9))
        t = sorted(p.simplices - q.simplices)
    if kind == "lemma39":
        base_cx = from_simplices([["a"]])
        base = "a"
    elif kind == "gen39":
        size = rng.randint(1, 3)
        sigma = tuple(f"b{i}" for i in range(size))
        base_cx = from_simplices([sigma])
        base = sigma
    else:
        while True:
            nb = rng.randint(1, 4)
            cone_over = random_complex(rng, [f"b{i}" for i in range(nb)], rng.randint(0, 3), 3)
            base_cx = from_simplices([s + ("apex",) for s in cone_over.simplices] + [("apex",)])
            extra = random_complex(rng, list(base_cx.vertices), 1, 2)
            cand = SimplicialComplex(base_cx.simplices | extra.simplices)
            core, _ = greedy_collapse(cand)
            if len(core) == 1:
                base_cx = cand
                break
        base = base_cx
    tops = base_cx.maximal_simplices
    joined = [simplex(top + s) for top in tops for s in q.simplices]
    all_vertices = verts + sorted(base_cx.vertices)
    r = random_complex(rng, all_vertices, rng.randint(0, 4), 3)
    tset = set(t)
    r_ok = [s for s in r.simplices if not any(set(x) <= set(s) for x in tset)]
    l = from_simplices(list(base_cx.simplices) + joined + list(q.simplices) + r_ok)
    return l, base, t
