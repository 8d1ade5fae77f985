"""Hypothesis checks for gluing Vietoris-Rips complexes, and certificate assembly.

A :class:`SplitSpace` is a finite metric space together with a cover by
two label sets X and Y meeting in A.  For every pair ``(S_X, S_Y)`` of
nonempty sets on either side of A with small diameter, the *maximal valid
sets* are the inclusion-maximal ``sigma`` in A that can be added without
breaking the diameter bound.  When each pair has a unique nonempty one (or,
more generally, when the complex of valid sets is collapsible), the glued
complex collapses onto the union of the two sides; the certificate
produced here records that collapse step by step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .collapse import (
    CollapseCertificate,
    gen39_sequence,
    greedy_collapse,
    twoplusplus_sequence,
)
from .errors import (
    CertificateError,
    EmptyA,
    HypothesisFailed,
    InvalidSplit,
    NotAPath,
    PrecondDiameterExceeded,
    SigmaNotCollapsible,
    SubgraphNotInGraph,
    UnknownLabel,
    VRGlueError,
)
from .jsonutil import encode_label, encode_number, encode_simplex
from .metric import (
    FiniteMetricSpace,
    GluingSpec,
    MetricGraph,
    _dijkstra,
    exact,
    glue_metric,
    graph_metric,
    label_key,
    sort_labels,
)
from .simplicial import (
    CLOSED,
    SimplicialComplex,
    _expand_cliques,
    from_simplices,
    maximal_cliques,
    simplex_key,
    union_complexes,
    vietoris_rips,
    within,
)

UNIQUE = "unique-nonempty"
COLLAPSIBLE = "collapsible"
FAIL = "fail"


# ------------------------------------------------------------------ split spaces


@dataclass(frozen=True, eq=False)
class SplitSpace:
    glued: FiniteMetricSpace
    x_labels: tuple
    y_labels: tuple

    @property
    def a_labels(self) -> tuple:
        ys = set(self.y_labels)
        return tuple(sort_labels(l for l in self.x_labels if l in ys))

    @property
    def x_only(self) -> tuple:
        a = set(self.a_labels)
        return tuple(sort_labels(l for l in self.x_labels if l not in a))

    @property
    def y_only(self) -> tuple:
        a = set(self.a_labels)
        return tuple(sort_labels(l for l in self.y_labels if l not in a))

    def x_space(self) -> FiniteMetricSpace:
        return self.glued.restrict(self.x_labels)

    def y_space(self) -> FiniteMetricSpace:
        return self.glued.restrict(self.y_labels)


def new_split_space(glued: FiniteMetricSpace, x_labels, y_labels, check: bool = True) -> SplitSpace:
    """Validate the label partition and the gluing formula through A."""
    x_labels, y_labels = tuple(x_labels), tuple(y_labels)
    for l in x_labels + y_labels:
        if l not in glued:
            raise UnknownLabel(f"unknown point {l!r}")
    if set(x_labels) | set(y_labels) != set(glued.labels):
        raise InvalidSplit("X and Y must cover every point")
    s = SplitSpace(glued, x_labels, y_labels)
    a = s.a_labels
    if not a:
        raise EmptyA("X and Y must share at least one point")
    if check:
        for p in s.x_only:
            for q in s.y_only:
                through = min(glued.d(p, t) + glued.d(t, q) for t in a)
                if glued.d(p, q) != through:
                    raise InvalidSplit(
                        f"d({p!r},{q!r}) = {glued.d(p, q)} but the shortest route through A is {through}"
                    )
    return s


def split_from_gluing(x: FiniteMetricSpace, y: FiniteMetricSpace, spec: GluingSpec) -> SplitSpace:
    glued = glue_metric(x, y, spec)
    rename = dict(zip(spec.a_labels_y, spec.a_labels_x))
    y_labels = tuple(rename.get(l, l) for l in y.labels)
    return SplitSpace(glued, x.labels, y_labels)


def split_from_graphs(gx: MetricGraph, gy: MetricGraph) -> SplitSpace:
    """Glue the sampled metric graphs along every sample point they share."""
    mx, my = graph_metric(gx), graph_metric(gy)
    shared = [l for l in mx.labels if l in my]
    if not shared:
        raise EmptyA("graphs share no sample point")
    return split_from_gluing(mx, my, GluingSpec.shared(shared))


# ------------------------------------------------------------ maximal valid sets


def _check_pair(s: SplitSpace, r, sx, sy, convention):
    sx, sy = tuple(sort_labels(set(sx))), tuple(sort_labels(set(sy)))
    if not sx or not sy:
        raise VRGlueError("S_X and S_Y must be nonempty")
    xo, yo = set(s.x_only), set(s.y_only)
    if not xo.issuperset(sx):
        raise VRGlueError(f"S_X must lie in X minus A: {sx!r}")
    if not yo.issuperset(sy):
        raise VRGlueError(f"S_Y must lie in Y minus A: {sy!r}")
    if not within(s.glued.diameter(sx + sy), r, convention):
        raise PrecondDiameterExceeded(f"diam(S_X u S_Y) exceeds r = {r}")
    return sx, sy


def _admissible_a(s: SplitSpace, r, members, convention) -> list:
    g = s.glued
    return [a for a in s.a_labels if all(within(g.d(a, z), r, convention) for z in members)]


def _maximal_in(s: SplitSpace, r, pool: list, convention) -> list[tuple]:
    if not pool:
        return []
    g = s.glued
    adj = [0] * len(pool)
    for i, a in enumerate(pool):
        for j, b in enumerate(pool):
            if i != j and within(g.d(a, b), r, convention):
                adj[i] |= 1 << j
    return sorted(
        (tuple(pool[i] for i in c) for c in maximal_cliques(adj)), key=simplex_key
    )


def maximal_valid_sets_vr(s: SplitSpace, r, sx, sy, convention: str = CLOSED) -> list[tuple]:
    """Inclusion-maximal nonempty ``sigma`` in A with ``diam(S_X u S_Y u sigma) <= r``."""
    r = exact(r)
    sx, sy = _check_pair(s, r, sx, sy, convention)
    return _maximal_in(s, r, _admissible_a(s, r, sx + sy, convention), convention)


@dataclass(frozen=True)
class ValidComplex:
    complex: SimplicialComplex
    verdict: str  # "collapsible", "empty" or "inconclusive"
    certificate: CollapseCertificate | None = None


def _valid_complex_from_pool(s, r, pool, convention) -> ValidComplex:
    if not pool:
        return ValidComplex(SimplicialComplex(frozenset()), "empty")
    sigma = from_simplices(_maximal_in(s, r, pool, convention))
    core, cert = greedy_collapse(sigma)
    return ValidComplex(sigma, "collapsible" if len(core) == 1 else "inconclusive", cert)


def maximal_valid_complex(s: SplitSpace, r, sx, sy, convention: str = CLOSED) -> ValidComplex:
    """The complex of every valid ``sigma`` for the pair, with a greedy collapsibility verdict."""
    r = exact(r)
    sx, sy = _check_pair(s, r, sx, sy, convention)
    return _valid_complex_from_pool(s, r, _admissible_a(s, r, sx + sy, convention), convention)


# ----------------------------------------------------------------------- reports


@dataclass
class PairRecord:
    sx: tuple
    sy: tuple
    maximal: list
    collapsible: str | None = None  # verdict of the valid-set complex, when it was needed
    witnesses: dict | None = None  # Cech reports: maximal set -> first witness

    @property
    def unique_nonempty(self) -> bool:
        return len(self.maximal) == 1

    def to_dict(self) -> dict:
        out = {
            "S_X": encode_simplex(self.sx),
            "S_Y": encode_simplex(self.sy),
            "maximal": [encode_simplex(m) for m in self.maximal],
        }
        if self.collapsible is not None:
            out["valid_complex"] = self.collapsible
        if self.witnesses is not None:
            out["witnesses"] = [
                {"sigma": encode_simplex(m), "witness": encode_label(w)} for m, w in self.witnesses.items()
            ]
        return out


@dataclass
class ValidSetReport:
    r: Fraction
    convention: str
    records: list
    verdict: str
    cap: int | None = None
    kind: str = "vr"

    @property
    def failures(self) -> list:
        if self.verdict == UNIQUE:
            return []
        if self.kind == "vr" and self.verdict == COLLAPSIBLE:
            return [rec for rec in self.records if not rec.unique_nonempty]
        return [
            rec
            for rec in self.records
            if not rec.unique_nonempty and rec.collapsible != "collapsible"
        ]

    def to_dict(self, all_records: bool = False) -> dict:
        chosen = self.records if all_records else self.failures
        return {
            "kind": self.kind,
            "r": encode_number(self.r),
            "convention": self.convention,
            "dimension_cap": self.cap,
            "verdict": self.verdict,
            "pairs_checked": len(self.records),
            "pairs_unique_nonempty": sum(1 for rec in self.records if rec.unique_nonempty),
            "failures" if not all_records else "records": [rec.to_dict() for rec in chosen],
        }


def cross_pairs(s: SplitSpace, r, convention: str = CLOSED, max_dim: int | None = None) -> list[tuple]:
    """All ``(S_X, S_Y)`` with ``diam(S_X u S_Y) <= r``, as ``(sx, sy)`` label tuples.

    ``max_dim`` caps ``|S_X| + |S_Y| - 1``.
    """
    r = exact(r)
    pts = list(s.x_only) + list(s.y_only)
    nx = len(s.x_only)
    g = s.glued
    up = [0] * len(pts)
    for i in range(len(pts)):
        row = g.dist[g.index(pts[i])]
        for j in range(i + 1, len(pts)):
            if within(row[g.index(pts[j])], r, convention):
                up[i] |= 1 << j
    size = None if max_dim is None else max_dim + 1
    out = []
    for c in _expand_cliques(up, size):
        if c[0] < nx <= c[-1]:
            out.append(
                (tuple(pts[i] for i in c if i < nx), tuple(pts[i] for i in c if i >= nx))
            )
    return out


def check_unique_max_hypothesis(
    s: SplitSpace, r, convention: str = CLOSED, max_dim: int | None = None
) -> ValidSetReport:
    """Check every cross pair for a unique nonempty maximal valid set.

    Pairs that fail are examined further: if all of their valid-set
    complexes collapse greedily the verdict is ``collapsible``.
    """
    r = exact(r)
    records = []
    all_unique = True
    all_collapsible = True
    for sx, sy in cross_pairs(s, r, convention, max_dim):
        pool = _admissible_a(s, r, sx + sy, convention)
        maximal = _maximal_in(s, r, pool, convention)
        rec = PairRecord(sx, sy, maximal)
        if len(maximal) != 1:
            all_unique = False
            rec.collapsible = _valid_complex_from_pool(s, r, pool, convention).verdict
            if rec.collapsible != "collapsible":
                all_collapsible = False
        records.append(rec)
    verdict = UNIQUE if all_unique else COLLAPSIBLE if all_collapsible else FAIL
    return ValidSetReport(r, convention, records, verdict, max_dim, "vr")


# -------------------------------------------------------------- Cech condition


def cech_condition_r(
    space: FiniteMetricSpace,
    x_landmarks: Iterable,
    y_landmarks: Iterable,
    r,
    witnesses: Iterable | None = None,
    convention: str = CLOSED,
    max_dim: int | None = None,
) -> ValidSetReport:
    """Condition-R over a finite witness set.

    For each pair ``(S_X, S_Y)`` with a common witness, the maximal ``sigma``
    in A whose balls share a witness with ``S_X u S_Y``.  Witnesses default
    to every point of ``space``.
    """
    r = exact(r)
    x_landmarks, y_landmarks = set(x_landmarks), set(y_landmarks)
    for l in x_landmarks | y_landmarks:
        if l not in space:
            raise UnknownLabel(f"unknown landmark {l!r}")
    a = sort_labels(x_landmarks & y_landmarks)
    if not a:
        raise EmptyA("landmark sets must share at least one point")
    xo = sort_labels(x_landmarks - set(a))
    yo = sort_labels(y_landmarks - set(a))
    wit = sort_labels(space.labels if witnesses is None else set(witnesses))
    for w in wit:
        if w not in space:
            raise UnknownLabel(f"unknown witness {w!r}")

    def ball(w, group):
        return frozenset(z for z in group if within(space.d(w, z), r, convention))

    balls = {w: (ball(w, xo), ball(w, yo), ball(w, a)) for w in wit}
    limit = math.inf if max_dim is None else max_dim + 1
    pairs = set()
    for bx, by, _ in balls.values():
        if not bx or not by:
            continue
        bx_s, by_s = sort_labels(bx), sort_labels(by)
        for i in range(1, len(bx_s) + 1):
            if i + 1 > limit:
                break
            for sx in combinations(bx_s, i):
                for j in range(1, min(len(by_s), limit - i) + 1):
                    for sy in combinations(by_s, j):
                        pairs.add((sx, sy))
    records = []
    ok = True
    for sx, sy in sorted(pairs, key=lambda p: (simplex_key(p[0] + p[1]), simplex_key(p[0]))):
        members = set(sx) | set(sy)
        found = {}
        for w in wit:
            bx, by, ba = balls[w]
            if members <= bx | by and ba:
                found.setdefault(ba, w)
        tops = [sig for sig in found if not any(sig < other for other in found)]
        maximal = sorted((tuple(sort_labels(t)) for t in tops), key=simplex_key)
        witness_of = {tuple(sort_labels(t)): found[t] for t in tops}
        rec = PairRecord(sx, sy, maximal, witnesses={m: witness_of[m] for m in maximal})
        if len(maximal) != 1:
            ok = False
        records.append(rec)
    return ValidSetReport(r, convention, records, UNIQUE if ok else FAIL, max_dim, "cech")


# ----------------------------------------------------------- graph admissibility


def _path_edges(g: MetricGraph, path: Sequence) -> list[tuple]:
    vs = set(g.vertices)
    for v in path:
        if v not in vs:
            raise SubgraphNotInGraph(f"vertex {v!r} is not in the graph")
    edges = []
    for u, v in zip(path, path[1:]):
        length = g.edge_length(u, v)
        if length is None:
            raise SubgraphNotInGraph(f"edge ({u!r},{v!r}) is not in the graph")
        edges.append((u, v, length))
    return edges


def shortest_cycle_through(g: MetricGraph, sub) -> Fraction | float:
    """Length of the shortest simple cycle of ``g`` sharing an edge with ``sub``.

    ``sub`` is a vertex sequence describing a path (or a single vertex, in
    which case cycles through that vertex count).  For each candidate edge
    the best cycle is the edge plus a shortest detour avoiding it.
    """
    sub = list(sub)
    if not sub:
        raise SubgraphNotInGraph("empty subgraph")
    if len(sub) == 1:
        v = sub[0]
        if v not in set(g.vertices):
            raise SubgraphNotInGraph(f"vertex {v!r} is not in the graph")
        edges = [(a, b, l) for a, b, l in g.edges if v in (a, b)]
    else:
        edges = _path_edges(g, sub)
    adj = g.adjacency()
    best = math.inf
    for u, v, length in edges:
        del adj[u][v], adj[v][u]
        d = _dijkstra(adj, u).get(v)
        adj[u][v] = adj[v][u] = length
        if d is not None and d + length < best:
            best = d + length
    return best


@dataclass
class AdmissibilityReport:
    alpha: Fraction
    ell_x: Fraction | float
    ell_y: Fraction | float
    degree_ok: bool
    degree_offender: object = None
    endpoints_ok: bool = True
    endpoint_offender: object = None

    @property
    def ell(self):
        return min(self.ell_x, self.ell_y)

    @property
    def alpha_ok(self) -> bool:
        return math.isinf(self.ell) or 3 * self.alpha < self.ell

    @property
    def verdict(self) -> str:
        return "pass" if self.alpha_ok and self.degree_ok and self.endpoints_ok else "fail"

    def to_dict(self) -> dict:
        return {
            "alpha": encode_number(self.alpha),
            "ell_x": encode_number(self.ell_x),
            "ell_y": encode_number(self.ell_y),
            "ell": encode_number(self.ell),
            "alpha_check": "pass" if self.alpha_ok else "fail",
            "degree_check": "pass" if self.degree_ok else "fail",
            "degree_offender": encode_label(self.degree_offender),
            "endpoint_check": "pass" if self.endpoints_ok else "fail",
            "endpoint_offender": encode_label(self.endpoint_offender),
            "verdict": self.verdict,
        }


def check_graph_gluing(gx: MetricGraph, gy: MetricGraph, ga: Sequence, a_labels: Iterable | None = None) -> AdmissibilityReport:
    """Admissibility of gluing ``gx`` and ``gy`` along the path ``ga``.

    ``ga`` is a vertex sequence.  ``a_labels`` is the sample set shared by
    the two sides; it defaults to every sample point of the path.
    """
    ga = list(ga)
    if not ga or len(set(ga)) != len(ga):
        raise NotAPath("gluing path must be a nonempty sequence of distinct vertices")
    try:
        ex = _path_edges(gx, ga)
        ey = _path_edges(gy, ga)
    except SubgraphNotInGraph as exc:
        raise NotAPath(str(exc)) from None
    if [e[2] for e in ex] != [e[2] for e in ey]:
        raise NotAPath("the gluing path has different edge lengths in the two graphs")
    alpha = sum((e[2] for e in ex), Fraction(0))
    ell_x = shortest_cycle_through(gx, ga)
    ell_y = shortest_cycle_through(gy, ga)
    offender = next((v for v in ga[1:-1] if gx.degree(v) != 2), None)
    ends = {ga[0], ga[-1]}
    end_off = None
    if a_labels is not None:
        a_set = set(a_labels)
        end_off = next((v for v in sort_labels(ends) if v not in a_set), None)
    return AdmissibilityReport(
        alpha, ell_x, ell_y, offender is None, offender, end_off is None, end_off
    )


# ------------------------------------------------------------- certificates


@dataclass
class GluingResult:
    mode: str
    equivalent: bool | None
    report: ValidSetReport | None = None
    certificate: CollapseCertificate | None = None
    replay_ok: bool | None = None
    betti_glued: tuple | None = None
    betti_union: tuple | None = None
    max_dim: int | None = None
    fallback: bool = False
    glued_complex: SimplicialComplex | None = field(default=None, repr=False)
    union_complex: SimplicialComplex | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {"mode": self.mode, "equivalent": self.equivalent, "fallback": self.fallback}
        if self.report is not None:
            out["hypothesis"] = self.report.to_dict()
        if self.certificate is not None:
            from .io import certificate_to_dict

            out["certificate"] = certificate_to_dict(self.certificate)
            out["replay_ok"] = self.replay_ok
        if self.betti_glued is not None:
            out["max_dim"] = self.max_dim
            out["betti_glued"] = list(self.betti_glued)
            out["betti_union"] = list(self.betti_union)
        return out


def union_of_sides(s: SplitSpace, r, convention: str = CLOSED, dim_cap: int | None = None) -> SimplicialComplex:
    kx = vietoris_rips(s.x_space(), r, convention, dim_cap)
    ky = vietoris_rips(s.y_space(), r, convention, dim_cap)
    return union_complexes(kx, ky)



def gluing_certificate(s: SplitSpace, r, convention: str = CLOSED, report: ValidSetReport | None = None):
    """Collapse certificate from ``VR(glued; r)`` to the union of the two sides.

    Stages follow the proofs: the cone bases (single sets or valid-set
    complexes) are ordered largest first, each stage adds the intervals for
    the pairs whose base it is, and the certificate collapses the stages in
    reverse.  Raises :class:`HypothesisFailed` when neither hypothesis holds.
    """
    r = exact(r)
    if report is None or report.cap is not None:
        report = check_unique_max_hypothesis(s, r, convention)
    if report.verdict == FAIL:
        raise HypothesisFailed("gluing hypotheses fail at this scale", report)
    l0 = union_of_sides(s, r, convention)
    k = vietoris_rips(s.glued, r, convention)

    groups: dict = {}
    if report.verdict == UNIQUE:
        for rec in report.records:
            groups.setdefault(rec.maximal[0], []).append(rec.sx + rec.sy)
        order = sorted(groups, key=lambda sig: (-len(sig), simplex_key(sig)))
    else:
        bases = {}
        for rec in report.records:
            cx = from_simplices(rec.maximal)
            key = cx.simplices
            bases.setdefault(key, cx)
            groups.setdefault(key, []).append(rec.sx + rec.sy)
        order = sorted(groups, key=lambda key: (-len(key), bases[key].fingerprint))

    stage_sets = []
    for key in order:
        added = set()
        for t in groups[key]:
            tops = [key] if report.verdict == UNIQUE else bases[key].maximal_simplices
            for top in tops:
                extra = [v for v in top]
                for m in range(len(extra) + 1):
                    for more in combinations(extra, m):
                        added.add(tuple(sorted(t + more, key=label_key)))
        stage_sets.append(added)

    current = set(k.simplices)
    steps = []
    sigma_certs = {}
    for key, added in zip(reversed(order), reversed(stage_sets)):
        below = SimplicialComplex(frozenset(current - added))
        if report.verdict == UNIQUE:
            cert = gen39_sequence(below, key, groups[key], fingerprints=False)
        else:
            base = bases[key]
            if key not in sigma_certs:
                core, c = greedy_collapse(base)
                if len(core) != 1:
                    raise SigmaNotCollapsible("valid-set complex did not collapse greedily")
                sigma_certs[key] = c
            cert = twoplusplus_sequence(
                below, base, groups[key], fingerprints=False, sigma_certificate=sigma_certs[key]
            )
        steps.extend(cert.steps)
        current -= added
    if current != set(l0.simplices):
        raise CertificateError("stages do not account for every cross simplex")
    return CollapseCertificate(tuple(steps), k.fingerprint, l0.fingerprint), k, l0, report


def verify_gluing_equivalence(
    s: SplitSpace,
    r,
    mode: str = "auto",
    convention: str = CLOSED,
    max_dim: int = 2,
) -> GluingResult:
    """Compare ``VR(glued; r)`` with the union of ``VR(X; r)`` and ``VR(Y; r)``.

    ``certificate`` builds and replays a collapse certificate (raising
    :class:`HypothesisFailed` if the hypotheses fail); ``betti`` compares
    Betti numbers up to ``max_dim``; ``auto`` tries a certificate first and
    falls back to Betti numbers.
    """
    from .homology import betti_vector
    from .replay import replay

    if mode not in ("auto", "certificate", "betti"):
        raise VRGlueError(f"unknown mode {mode!r}")
    r = exact(r)
    report = None
    if mode in ("auto", "certificate"):
        report = check_unique_max_hypothesis(s, r, convention)
        if report.verdict != FAIL:
            cert, k, l0, report = gluing_certificate(s, r, convention, report)
            ok = replay(k.simplices, cert, expect_final=l0.simplices).ok
            return GluingResult("certificate", ok, report, cert, ok, glued_complex=k, union_complex=l0)
        if mode == "certificate":
            raise HypothesisFailed("gluing hypotheses fail at this scale", report)
    cap = max_dim + 1
    k = vietoris_rips(s.glued, r, convention, cap)
    l0 = union_of_sides(s, r, convention, cap)
    bk, bl = betti_vector(k, max_dim), betti_vector(l0, max_dim)
    return GluingResult(
        "betti", bk == bl, report, None, None, bk, bl, max_dim, fallback=mode == "auto",
        glued_complex=k, union_complex=l0,
    )
