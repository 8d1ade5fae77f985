"""Finite metric spaces and the ways this package builds them.

Distances are stored as :class:`fractions.Fraction` so that scale thresholds
such as ``r = diam(sigma)`` compare exactly under both the ``<=`` and ``<``
conventions.  Floats are read through their shortest decimal representation
(``0.1`` becomes ``1/10``), which keeps decimal inputs exact.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DisconnectedGraph,
    DuplicateLabel,
    EmptyA,
    EmptyY0,
    NegativeDistance,
    NonIsometricA,
    NonzeroDiagonal,
    TooFewPoints,
    TriangleViolation,
    UnknownBasepoint,
    UnknownLabel,
    VRGlueError,
)

# Only used to pre-screen triangle checks in floating point; every reported
# violation is confirmed with exact arithmetic.
EPS = 1e-9

Label = Hashable


def exact(x: Any) -> Fraction:
    """Convert a number (int, Fraction, float, decimal string) to a Fraction."""
    if isinstance(x, bool):
        raise TypeError("booleans are not distances")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, float):
        if not math.isfinite(x):
            raise VRGlueError(f"non-finite length {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def label_key(label: Any):
    """Total order on heterogeneous labels (ints < strings < tuples < other)."""
    if isinstance(label, bool):
        return (0, int(label))
    if isinstance(label, (int, Fraction)):
        return (0, label)
    if isinstance(label, str):
        return (1, label)
    if isinstance(label, tuple):
        return (2, tuple(label_key(part) for part in label))
    return (3, repr(label))


def sort_labels(labels: Iterable[Label]) -> list:
    return sorted(labels, key=label_key)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labeled points with a dense symmetric matrix of exact distances.

    Construct through :func:`new_finite_metric`, which validates the matrix;
    the dataclass constructor trusts its inputs.
    """

    labels: tuple
    dist: tuple
    is_pseudo: bool = False
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {l: i for i, l in enumerate(self.labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.dist == other.dist
            and self.is_pseudo == other.is_pseudo
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.dist, self.is_pseudo))

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"unknown point {label!r}") from None

    def d(self, a, b) -> Fraction:
        return self.dist[self.index(a)][self.index(b)]

    def diameter(self, labels: Iterable[Label] | None = None) -> Fraction:
        idx = range(len(self)) if labels is None else [self.index(l) for l in labels]
        idx = list(idx)
        best = Fraction(0)
        for p, i in enumerate(idx):
            row = self.dist[i]
            for j in idx[p + 1:]:
                if row[j] > best:
                    best = row[j]
        return best

    def restrict(self, labels: Iterable[Label]) -> "FiniteMetricSpace":
        labels = tuple(labels)
        idx = [self.index(l) for l in labels]
        dist = tuple(tuple(self.dist[i][j] for j in idx) for i in idx)
        return FiniteMetricSpace(labels, dist, self.is_pseudo)

    def relabel(self, mapping: Mapping | Callable) -> "FiniteMetricSpace":
        fn = mapping if callable(mapping) else mapping.__getitem__
        labels = tuple(fn(l) for l in self.labels)
        if len(set(labels)) != len(labels):
            raise DuplicateLabel("relabeling is not injective")
        return FiniteMetricSpace(labels, self.dist, self.is_pseudo)

    def is_isometric_to(self, other: "FiniteMetricSpace", mapping: Mapping | None = None) -> bool:
        """Compare distances under a label correspondence (identity by default)."""
        if len(self) != len(other):
            return False
        mapping = mapping or {l: l for l in self.labels}
        try:
            return all(
                self.d(a, b) == other.d(mapping[a], mapping[b])
                for a in self.labels
                for b in self.labels
            )
        except (KeyError, UnknownLabel):
            return False

    def as_float_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.dist], dtype=float)


def _check_triangle(labels, dist) -> None:
    n = len(labels)
    if n < 3:
        return
    m = np.array([[float(v) for v in row] for row in dist], dtype=float)
    scale = max(1.0, float(m.max()))
    for j in range(n):
        # i, k with m[i,k] > m[i,j] + m[j,k] (float pre-screen, exact confirm)
        slack = m - (m[:, j][:, None] + m[j, :][None, :])
        cand = np.argwhere(slack > -EPS * scale)
        for i, k in cand:
            i, k = int(i), int(k)
            if dist[i][k] > dist[i][j] + dist[j][k]:
                raise TriangleViolation(labels[i], labels[j], labels[k])


def new_finite_metric(
    labels: Sequence[Label],
    matrix: Sequence[Sequence[Any]],
    is_pseudo: bool = False,
) -> FiniteMetricSpace:
    """Validate ``matrix`` and wrap it as a :class:`FiniteMetricSpace`.

    With ``is_pseudo`` the triangle inequality is not enforced and distinct
    points may be at distance zero; symmetry, zero diagonal and
    nonnegativity are always required.
    """
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise DuplicateLabel("labels must be pairwise distinct")
    n = len(labels)
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise VRGlueError(f"matrix must be {n}x{n}")
    dist = [[exact(v) for v in row] for row in matrix]
    for i in range(n):
        if dist[i][i] != 0:
            raise NonzeroDiagonal(f"d({labels[i]!r},{labels[i]!r}) = {dist[i][i]}")
        for j in range(i + 1, n):
            if dist[i][j] != dist[j][i]:
                raise AsymmetricMatrix(f"d({labels[i]!r},{labels[j]!r}) != d({labels[j]!r},{labels[i]!r})")
            if dist[i][j] < 0:
                raise NegativeDistance(f"d({labels[i]!r},{labels[j]!r}) = {dist[i][j]}")
    if not is_pseudo:
        for i in range(n):
            for j in range(i + 1, n):
                if dist[i][j] == 0:
                    raise VRGlueError(
                        f"distinct points {labels[i]!r}, {labels[j]!r} at distance 0 (use is_pseudo)"
                    )
        _check_triangle(labels, dist)
    return FiniteMetricSpace(labels, tuple(tuple(row) for row in dist), bool(is_pseudo))


# ---------------------------------------------------------------- metric graphs


def _edge_key(u, v):
    return (u, v) if label_key(u) <= label_key(v) else (v, u)


@dataclass(frozen=True)
class MetricGraph:
    """Graph with positive edge lengths.

    ``subdivision`` is either one count applied to every edge or a mapping
    from an edge ``(u, v)`` to its number of interior sample points.
    """

    vertices: tuple
    edges: tuple  # ((u, v, length), ...)
    subdivision: Any = 0

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise DuplicateLabel("duplicate vertex")
        vset = set(verts)
        clean = []
        seen = set()
        for e in self.edges:
            u, v, length = e
            if u not in vset or v not in vset:
                raise UnknownLabel(f"edge ({u!r},{v!r}) uses an unknown vertex")
            if u == v:
                raise VRGlueError(f"self-loop at {u!r}")
            key = _edge_key(u, v)
            if key in seen:
                raise VRGlueError(f"parallel edge {key!r}")
            seen.add(key)
            length = exact(length)
            if length <= 0:
                raise VRGlueError(f"edge {key!r} must have positive length")
            clean.append((u, v, length))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(clean))
        sub = self.subdivision
        if isinstance(sub, Mapping):
            sub = {_edge_key(*k): int(c) for k, c in sub.items()}
            if any(c < 0 for c in sub.values()):
                raise VRGlueError("subdivision counts must be >= 0")
            object.__setattr__(self, "subdivision", sub)
        elif int(sub) < 0:
            raise VRGlueError("subdivision counts must be >= 0")

    @classmethod
    def from_edges(cls, edges, subdivision=0, vertices=None) -> "MetricGraph":
        """Build from ``(u, v)`` or ``(u, v, length)`` tuples; default length 1."""
        full = []
        verts = list(vertices) if vertices is not None else []
        known = set(verts)
        for e in edges:
            u, v = e[0], e[1]
            length = e[2] if len(e) > 2 else 1
            full.append((u, v, length))
            for w in (u, v):
                if w not in known:
                    known.add(w)
                    verts.append(w)
        return cls(tuple(verts), tuple(full), subdivision)

    def edge_subdivision(self, u, v) -> int:
        if isinstance(self.subdivision, Mapping):
            return self.subdivision.get(_edge_key(u, v), 0)
        return int(self.subdivision)

    def adjacency(self) -> dict:
        adj = {v: {} for v in self.vertices}
        for u, v, length in self.edges:
            adj[u][v] = length
            adj[v][u] = length
        return adj

    def degree(self, v) -> int:
        return sum(1 for u, w, _ in self.edges if v in (u, w))

    def edge_length(self, u, v) -> Fraction | None:
        for a, b, length in self.edges:
            if {a, b} == {u, v}:
                return length
        return None

    def has_edge(self, u, v) -> bool:
        return self.edge_length(u, v) is not None

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def sample_graph(self) -> tuple[list, dict]:
        """Points (vertices then subdivision points) and their weighted adjacency.

        The ``i``-th interior point of edge ``(u, v)`` (canonical orientation)
        is labeled ``(u, v, i)`` and lies at distance ``i * len / (k + 1)``
        from ``u``.
        """
        points = list(self.vertices)
        adj = {v: {} for v in points}
        for u, v, length in self.edges:
            u, v = _edge_key(u, v)
            k = self.edge_subdivision(u, v)
            step = length / (k + 1)
            chain = [u] + [(u, v, i) for i in range(1, k + 1)] + [v]
            for p in chain[1:-1]:
                points.append(p)
                adj[p] = {}
            for a, b in zip(chain, chain[1:]):
                adj[a][b] = step
                adj[b][a] = step
        return points, adj


def _dijkstra(adj: dict, source) -> dict:
    dist = {source: Fraction(0)}
    heap = [(Fraction(0), 0, source)]
    counter = 1
    done = set()
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for w, length in adj[u].items():
            nd = d + length
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, counter, w))
                counter += 1
    return dist


def graph_metric(g: MetricGraph) -> FiniteMetricSpace:
    """Shortest-path metric on the vertices and subdivision points of ``g``."""
    if not g.is_connected():
        raise DisconnectedGraph("metric graph must be connected")
    points, adj = g.sample_graph()
    rows = []
    for p in points:
        dp = _dijkstra(adj, p)
        rows.append(tuple(dp[q] for q in points))
    return FiniteMetricSpace(tuple(points), tuple(rows), False)


# ------------------------------------------------------------------- gluings


@dataclass(frozen=True)
class GluingSpec:
    """Bijection between the copy of ``A`` inside X and the copy inside Y."""

    a_labels_x: tuple
    a_labels_y: tuple

    def __post_init__(self):
        object.__setattr__(self, "a_labels_x", tuple(self.a_labels_x))
        object.__setattr__(self, "a_labels_y", tuple(self.a_labels_y))
        if len(self.a_labels_x) != len(self.a_labels_y):
            raise VRGlueError("A must be given as a bijection (equal lengths)")
        if not self.a_labels_x:
            raise EmptyA("gluing set A must be nonempty")

    @classmethod
    def shared(cls, labels: Iterable[Label]) -> "GluingSpec":
        labels = tuple(labels)
        return cls(labels, labels)


def glue_metric(x: FiniteMetricSpace, y: FiniteMetricSpace, spec: GluingSpec) -> FiniteMetricSpace:
    """Metric gluing of ``x`` and ``y`` along ``A``.

    Points of ``A`` keep their X labels; the remaining Y points keep their
    own labels, which must not collide with X labels.  Cross distances are
    ``min_a d_X(s, a) + d_Y(a, t)``.
    """
    ax = [x.index(a) for a in spec.a_labels_x]
    ay = [y.index(a) for a in spec.a_labels_y]
    if len(set(ax)) != len(ax) or len(set(ay)) != len(ay):
        raise VRGlueError("A labels repeat")
    for p in range(len(ax)):
        for q in range(len(ax)):
            if x.dist[ax[p]][ax[q]] != y.dist[ay[p]][ay[q]]:
                raise NonIsometricA(
                    f"d_X({spec.a_labels_x[p]!r},{spec.a_labels_x[q]!r}) != "
                    f"d_Y({spec.a_labels_y[p]!r},{spec.a_labels_y[q]!r})"
                )
    a_y = set(ay)
    y_rest = [j for j in range(len(y)) if j not in a_y]
    clash = [y.labels[j] for j in y_rest if y.labels[j] in x]
    if clash:
        raise DuplicateLabel(f"Y labels {clash!r} collide with X labels; relabel first")
    # position of each Y point in the glued space
    y_pos = {}
    for p, j in enumerate(ay):
        y_pos[j] = ax[p]
    for offset, j in enumerate(y_rest):
        y_pos[j] = len(x) + offset
    n = len(x) + len(y_rest)
    dist = [[Fraction(0)] * n for _ in range(n)]
    for i in range(len(x)):
        for k in range(len(x)):
            dist[i][k] = x.dist[i][k]
    for j in range(len(y)):
        for l in range(len(y)):
            dist[y_pos[j]][y_pos[l]] = y.dist[j][l]
    a_x = set(ax)
    for i in range(len(x)):
        if i in a_x:
            continue
        for j in y_rest:
            best = min(x.dist[i][ax[p]] + y.dist[ay[p]][j] for p in range(len(ax)))
            dist[i][y_pos[j]] = best
            dist[y_pos[j]][i] = best
    labels = x.labels + tuple(y.labels[j] for j in y_rest)
    return FiniteMetricSpace(labels, tuple(tuple(r) for r in dist), x.is_pseudo or y.is_pseudo)


def wedge_metric(x: FiniteMetricSpace, base_x, y: FiniteMetricSpace, base_y) -> FiniteMetricSpace:
    """Wedge sum: glue at one basepoint; the shared point keeps ``base_x``."""
    if base_x not in x:
        raise UnknownBasepoint(f"{base_x!r} is not a point of X")
    if base_y not in y:
        raise UnknownBasepoint(f"{base_y!r} is not a point of Y")
    return glue_metric(x, y, GluingSpec((base_x,), (base_y,)))


def sup_product_subset(
    x: FiniteMetricSpace,
    x0_labels: Iterable[Label],
    y: FiniteMetricSpace,
    y0_labels: Iterable[Label],
) -> FiniteMetricSpace:
    """``X x Y0  union  X0 x Y`` with the L-infinity (max) product metric.

    Points are labeled ``(x, y)`` and listed in lexicographic X-then-Y order.
    """
    x0 = set(x0_labels)
    y0 = set(y0_labels)
    if not y0:
        raise EmptyY0("Y0 must be nonempty")
    for l in x0:
        x.index(l)
    for l in y0:
        y.index(l)
    pts = [(i, j) for i in range(len(x)) for j in range(len(y))
           if y.labels[j] in y0 or x.labels[i] in x0]
    labels = tuple((x.labels[i], y.labels[j]) for i, j in pts)
    dist = tuple(
        tuple(max(x.dist[i][k], y.dist[j][l]) for k, l in pts) for i, j in pts
    )
    return FiniteMetricSpace(labels, dist, x.is_pseudo or y.is_pseudo)


def sample_circle(circumference, n: int, labels: Sequence[Label] | None = None) -> FiniteMetricSpace:
    """``n`` equally spaced points on a circle, geodesic (arc-length) metric."""
    if n < 3:
        raise TooFewPoints("a circle sample needs at least 3 points")
    c = exact(circumference)
    if c <= 0:
        raise VRGlueError("circumference must be positive")
    step = c / n
    labels = tuple(range(n)) if labels is None else tuple(labels)
    dist = tuple(
        tuple(min(abs(i - j), n - abs(i - j)) * step for j in range(n)) for i in range(n)
    )
    return FiniteMetricSpace(labels, dist, False)


def sample_line(positions: Sequence[Any], labels: Sequence[Label] | None = None) -> FiniteMetricSpace:
    """Points on the real line at the given positions."""
    pos = [exact(p) for p in positions]
    labels = tuple(range(len(pos))) if labels is None else tuple(labels)
    is_pseudo = len(set(pos)) != len(pos)
    dist = tuple(tuple(abs(a - b) for b in pos) for a in pos)
    return FiniteMetricSpace(labels, dist, is_pseudo)
