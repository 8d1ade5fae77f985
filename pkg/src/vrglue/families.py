"""Example graph families built by admissible iterated gluing, and circular ladders.

A :class:`GluingRecipe` starts from the single vertex ``0`` and applies
steps in order.  Every cycle attachment is checked with
:func:`~vrglue.gluing.check_graph_gluing` against the graph built so far,
so gluing order matters exactly as it does for the gluing theorem.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .collapse import dismantle, greedy_collapse
from .errors import EmptyY0, InadmissibleStep, RecipeNotAdmissible, VRGlueError
from .gluing import AdmissibilityReport, check_graph_gluing
from .jsonutil import decode_label, encode_label, encode_number
from .metric import (
    FiniteMetricSpace,
    MetricGraph,
    exact,
    graph_metric,
    sample_circle,
    sample_line,
    sup_product_subset,
)
from .simplicial import CLOSED, vietoris_rips

VERTEX = "vertex"
METRIC = "metric"


@dataclass(frozen=True)
class AttachCycle:
    k: int
    at: tuple

    op = "attach_cycle"

    def to_dict(self) -> dict:
        return {"op": self.op, "k": self.k, "at": [encode_label(v) for v in self.at]}


@dataclass(frozen=True)
class AttachDismantlable:
    """Attach a dismantlable graph, identifying its ``anchor`` vertices with ``at``."""

    edges: tuple
    anchor: tuple
    at: tuple

    op = "attach_dismantlable"

    def to_dict(self) -> dict:
        return {
            "op": self.op,
            "edges": [[encode_label(u), encode_label(v)] for u, v in self.edges],
            "anchor": [encode_label(v) for v in self.anchor],
            "at": [encode_label(v) for v in self.at],
        }


@dataclass(frozen=True)
class AttachEdge:
    at: tuple

    op = "attach_edge"

    def to_dict(self) -> dict:
        return {"op": self.op, "at": [encode_label(v) for v in self.at]}


def attach_cycle(k: int, at) -> AttachCycle:
    return AttachCycle(int(k), _as_path(at))


def attach_dismantlable(edges, at, anchor=None) -> AttachDismantlable:
    edges = tuple((u, v) for u, v, *_ in edges)
    at = _as_path(at)
    if anchor is None:
        anchor = edges[0][: len(at)] if len(at) == 2 else (edges[0][0],)
    return AttachDismantlable(edges, _as_path(anchor), at)


def attach_edge(at) -> AttachEdge:
    return AttachEdge(_as_path(at))


def _as_path(at) -> tuple:
    if isinstance(at, (list, tuple)):
        return tuple(at)
    return (at,)


@dataclass(frozen=True)
class GluingRecipe:
    steps: tuple = ()
    kind: str = VERTEX
    subdivision: int = 0

    def cycles(self) -> list[tuple[int, int]]:
        return [(st.k, self.subdivision) for st in self.steps if isinstance(st, AttachCycle)]

    def validate(self) -> None:
        build_recipe(self)

    def reversed(self) -> "GluingRecipe":
        return GluingRecipe(tuple(reversed(self.steps)), self.kind, self.subdivision)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "subdivision": self.subdivision,
            "steps": [st.to_dict() for st in self.steps],
        }


def recipe_from_dict(obj: dict) -> GluingRecipe:
    steps = []
    for raw in obj.get("steps", []):
        op = raw.get("op")
        at = tuple(decode_label(v) for v in raw["at"])
        if op == "attach_cycle":
            steps.append(AttachCycle(int(raw["k"]), at))
        elif op == "attach_dismantlable":
            edges = tuple((decode_label(u), decode_label(v)) for u, v in raw["edges"])
            anchor = tuple(decode_label(v) for v in raw.get("anchor", []))
            steps.append(attach_dismantlable(edges, at, anchor or None))
        elif op == "attach_edge":
            steps.append(AttachEdge(at))
        else:
            raise VRGlueError(f"unknown recipe step {op!r}")
    kind = obj.get("kind", VERTEX)
    if kind not in (VERTEX, METRIC):
        raise VRGlueError(f"unknown recipe kind {kind!r}")
    return GluingRecipe(tuple(steps), kind, int(obj.get("subdivision", 0)))


@dataclass
class BuiltRecipe:
    graph: MetricGraph
    metric: FiniteMetricSpace
    cycles: list
    reports: list = field(default_factory=list)  # (step index, AdmissibilityReport) per cycle step

    def to_dict(self) -> dict:
        return {
            "vertices": [encode_label(v) for v in self.graph.vertices],
            "edges": [[encode_label(u), encode_label(v), encode_number(l)] for u, v, l in self.graph.edges],
            "points": len(self.metric),
            "cycles": [k for k, _ in self.cycles],
            "admissibility": [dict(step=i, **rep.to_dict()) for i, rep in self.reports],
        }


class _Builder:
    def __init__(self):
        self.vertices = [0]
        self.edges = []  # (u, v, length)
        self.next = 1

    def graph(self) -> MetricGraph:
        return MetricGraph(tuple(self.vertices), tuple(self.edges))

    def fresh(self) -> int:
        v = self.next
        self.next += 1
        self.vertices.append(v)
        return v


def _check_at(b: _Builder, i: int, at: tuple, recipe: GluingRecipe) -> None:
    known = set(b.vertices)
    for v in at:
        if v not in known:
            raise InadmissibleStep(i, f"vertex {v!r} does not exist yet")
    if len(set(at)) != len(at):
        raise InadmissibleStep(i, f"attachment path repeats a vertex")
    g = b.graph()
    for u, v in zip(at, at[1:]):
        if not g.has_edge(u, v):
            raise InadmissibleStep(i, f"({u!r},{v!r}) is not an edge")


def build_recipe(recipe: GluingRecipe) -> BuiltRecipe:
    """Apply the steps in order, rejecting the first inadmissible one."""
    b = _Builder()
    cycles = []
    reports = []
    for i, st in enumerate(recipe.steps):
        _check_at(b, i, st.at, recipe)
        if isinstance(st, AttachCycle):
            m = len(st.at) - 1
            if st.k < 3 or m >= st.k:
                raise InadmissibleStep(i, f"cannot glue C_{st.k} along a path with {m} edges")
            new = [b.fresh() for _ in range(st.k - m - 1)]
            ring = list(st.at) + new
            cyc_edges = [(ring[j], ring[(j + 1) % st.k], 1) for j in range(st.k)]
            cycle_graph = MetricGraph.from_edges(cyc_edges)
            current = b.graph()
            if len(st.at) > 1:
                rep = check_graph_gluing(current, cycle_graph, st.at)
                swapped = check_graph_gluing(cycle_graph, current, st.at)
                if not rep.degree_ok and swapped.degree_ok:
                    rep = swapped
            else:
                rep = AdmissibilityReport(Fraction(0), float("inf"), Fraction(st.k), True)
            reports.append((i, rep))
            if rep.verdict != "pass":
                for v in new:
                    b.vertices.remove(v)
                raise InadmissibleStep(
                    i,
                    f"gluing C_{st.k} along {list(st.at)!r} is not admissible "
                    f"(alpha = {rep.alpha}, ell = {rep.ell})",
                    rep,
                )
            b.edges.extend(e for e in cyc_edges[m:])
            cycles.append((st.k, recipe.subdivision))
        elif isinstance(st, AttachDismantlable):
            if len(st.at) > 2 or len(st.anchor) != len(st.at):
                raise InadmissibleStep(i, f"dismantlable graphs attach along a vertex or an edge")
            adj = {}
            for u, v in st.edges:
                adj.setdefault(u, set()).add(v)
                adj.setdefault(v, set()).add(u)
            if dismantle(adj) is None:
                raise InadmissibleStep(i, f"attached graph is not dismantlable")
            if recipe.kind == METRIC and len(st.edges) != len(adj) - 1:
                raise InadmissibleStep(i, f"metric recipes only attach trees")
            if len(st.anchor) == 2 and st.anchor[1] not in adj.get(st.anchor[0], ()):
                raise InadmissibleStep(i, f"anchor is not an edge of the attached graph")
            rename = dict(zip(st.anchor, st.at))
            for v in adj:
                if v not in rename:
                    rename[v] = b.fresh()
            have = {frozenset((u, v)) for u, v, _ in b.edges}
            for u, v in st.edges:
                e = frozenset((rename[u], rename[v]))
                if e not in have:
                    have.add(e)
                    b.edges.append((rename[u], rename[v], 1))
        elif isinstance(st, AttachEdge):
            if len(st.at) != 1:
                raise InadmissibleStep(i, f"edges attach along a single vertex")
            b.edges.append((st.at[0], b.fresh(), 1))
        else:
            raise InadmissibleStep(i, f"unknown step {st!r}")
    g = b.graph()
    if recipe.kind == METRIC and recipe.subdivision:
        g = MetricGraph(g.vertices, g.edges, recipe.subdivision)
    return BuiltRecipe(g, graph_metric(g), cycles, reports)


# --------------------------------------------------------- named examples


def wedge_of_cycles(ks: Sequence[int], kind: str = VERTEX, subdivision: int = 0) -> GluingRecipe:
    """Cycles all wedged at vertex 0."""
    return GluingRecipe(tuple(attach_cycle(k, 0) for k in ks), kind, subdivision)


def figure7_recipe(longest_first: bool = True) -> GluingRecipe:
    """C_9 and C_10 share a 2-edge path; a triangle sits on the first edge of that path.

    The admissible order glues along the long path before the triangle
    shortens the cycles through it.
    """
    c9 = attach_cycle(9, 0)
    c10 = attach_cycle(10, (0, 1, 2))
    tri = attach_dismantlable(((0, 1), (1, 2), (0, 2)), (0, 1), (0, 1))
    steps = (c9, c10, tri) if longest_first else (c9, tri, c10)
    return GluingRecipe(steps, VERTEX)


def cube_graph() -> MetricGraph:
    return MetricGraph.from_edges(
        [(a, b) for a in range(8) for b in range(a + 1, 8) if bin(a ^ b).count("1") == 1]
    )


# ----------------------------------------------------------------- ladders


@dataclass
class Ladder:
    x: FiniteMetricSpace
    x0: tuple
    y: FiniteMetricSpace
    y0: tuple
    sup: FiniteMetricSpace
    graph: MetricGraph
    graph_space: FiniteMetricSpace


def build_circular_ladder(
    n: int,
    circumference=None,
    m: int = 2,
    width=1,
    circle_points: int | None = None,
    segment_points: int | None = None,
    ring_positions: Sequence | None = None,
) -> Ladder:
    """Circular ladder with ``n`` rungs and ``m`` rings, in both metrics.

    The sup-metric version is ``X x Y0  u  X0 x Y`` with X a circle sample
    of ``circle_points`` points (default ``2n``), X0 the ``n`` evenly spaced
    rung positions, Y a sample of ``[0, width]`` with ``segment_points``
    points (default ``2m - 1``) containing the ring heights Y0.  The graph
    version uses the sampled points of that same ladder as vertices,
    metrized by path length.
    """
    if n < 3:
        raise VRGlueError("a circular ladder needs at least 3 rungs")
    if m < 2 and ring_positions is None:
        raise VRGlueError("a circular ladder needs at least 2 rings")
    circumference = exact(n if circumference is None else circumference)
    width = exact(width)
    circle_points = 2 * n if circle_points is None else int(circle_points)
    if circle_points % n:
        raise VRGlueError("circle_points must be a multiple of the rung count")
    rings = (
        [exact(p) for p in ring_positions]
        if ring_positions is not None
        else [width * j / (m - 1) for j in range(m)]
    )
    if not rings:
        raise EmptyY0("ladder needs at least one ring")
    if segment_points is None:
        ys = set(rings)
        for a, b in zip(sorted(rings), sorted(rings)[1:]):
            ys.add((a + b) / 2)
    else:
        ys = set(rings) | {width * j / (segment_points - 1) for j in range(segment_points)}
    ys = sorted(ys)
    x = sample_circle(circumference, circle_points)
    step = circle_points // n
    x0 = tuple(x.labels[i] for i in range(0, circle_points, step))
    y = sample_line(ys, labels=ys)
    y0 = tuple(sorted(set(rings)))
    sup = sup_product_subset(x, x0, y, y0)

    # graph version on the same point set
    edges = []
    arc = circumference / circle_points
    for yv in y0:
        for i in range(circle_points):
            a, b = x.labels[i], x.labels[(i + 1) % circle_points]
            edges.append(((a, yv), (b, yv), arc))
    for xv in x0:
        for lo, hi in zip(ys, ys[1:]):
            if hi - lo > 0:
                edges.append(((xv, lo), (xv, hi), hi - lo))
    graph = MetricGraph.from_edges(edges)
    return Ladder(x, x0, y, y0, sup, graph, graph_metric(graph))


@dataclass
class SupReport:
    r: Fraction
    kappa_y: Fraction
    y0_contractible: bool
    y_contractible: bool
    betti_sup: tuple
    betti_x: tuple
    max_dim: int

    @property
    def hypotheses_hold(self) -> bool:
        return self.y0_contractible and self.y_contractible

    @property
    def r_at_least_kappa(self) -> bool:
        return self.r >= self.kappa_y

    @property
    def equal(self) -> bool:
        return self.betti_sup == self.betti_x

    def to_dict(self) -> dict:
        return {
            "r": encode_number(self.r),
            "kappa_Y": encode_number(self.kappa_y),
            "r_at_least_kappa": self.r_at_least_kappa,
            "hypothesis_Y0_collapses": self.y0_contractible,
            "hypothesis_Y_collapses": self.y_contractible,
            "max_dim": self.max_dim,
            "betti_sup": list(self.betti_sup),
            "betti_X": list(self.betti_x),
            "equal": self.equal,
        }


def kappa(y0: FiniteMetricSpace):
    """Largest gap between consecutive points, for a subset of a line."""
    if len(y0) < 2:
        return Fraction(0)
    p = y0.labels[0]
    far = max(y0.labels, key=lambda q: y0.d(p, q))
    pos = sorted(y0.d(far, q) for q in y0.labels)
    return max(b - a for a, b in zip(pos, pos[1:]))


def _collapses(m: FiniteMetricSpace, r, convention) -> bool:
    core, _ = greedy_collapse(vietoris_rips(m, r, convention))
    return len(core) == 1


def verify_sup_theorem(
    x: FiniteMetricSpace, x0, y: FiniteMetricSpace, y0, r, max_dim: int = 2, convention: str = CLOSED
) -> SupReport:
    """Check the collapsibility hypotheses on Y0 and Y, then compare Betti numbers."""
    from .homology import betti

    x0, y0 = tuple(x0), tuple(y0)
    if not y0:
        raise EmptyY0("Y0 must be nonempty")
    r = exact(r)
    y0_space = y.restrict(y0)
    sup = sup_product_subset(x, x0, y, y0)
    cap = max_dim + 1
    return SupReport(
        r,
        kappa(y0_space),
        _collapses(y0_space, r, convention),
        _collapses(y, r, convention),
        betti(vietoris_rips(sup, r, convention, cap), max_dim),
        betti(vietoris_rips(x, r, convention, cap), max_dim),
        max_dim,
    )
