"""Simplicial complexes, Vietoris-Rips and ambient Cech constructions, filtrations.

A simplex is a nonempty tuple of labels sorted by :func:`~vrglue.metric.label_key`.
Complexes store every simplex (not just the maximal ones) so that face and
coface lookups are set-membership tests.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import InvalidFiltration, UnknownLandmark, VertexClash, VRGlueError
from .metric import FiniteMetricSpace, exact, label_key, sort_labels

CLOSED = "closed"
OPEN = "open"
CONVENTIONS = (CLOSED, OPEN)


def simplex(vertices: Iterable) -> tuple:
    """Canonical form of a simplex: sorted tuple of distinct labels."""
    verts = sort_labels(set(vertices))
    if not verts:
        raise VRGlueError("a simplex must be nonempty")
    return tuple(verts)


def faces(s: tuple, include_self: bool = True) -> Iterator[tuple]:
    """All nonempty faces of ``s`` (canonical order is inherited)."""
    top = len(s) if include_self else len(s) - 1
    for k in range(1, top + 1):
        yield from combinations(s, k)


def facets(s: tuple) -> list[tuple]:
    return [s[:i] + s[i + 1:] for i in range(len(s))] if len(s) > 1 else []


def within(d, r, convention: str = CLOSED) -> bool:
    if convention == CLOSED:
        return d <= r
    if convention == OPEN:
        return d < r
    raise VRGlueError(f"unknown convention {convention!r}")


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Downward-closed set of simplices, optionally truncated at ``dim_cap``."""

    simplices: frozenset
    dim_cap: int | None = None

    def __contains__(self, s) -> bool:
        return s in self.simplices

    def __iter__(self):
        return iter(self.simplices)

    def __len__(self) -> int:
        return len(self.simplices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash(self.simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector}, dim_cap={self.dim_cap})"

    @cached_property
    def vertices(self) -> frozenset:
        return frozenset(s[0] for s in self.simplices if len(s) == 1)

    @cached_property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    @cached_property
    def f_vector(self) -> tuple:
        counts = [0] * (self.dimension + 1)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return tuple(counts)

    def by_dimension(self) -> list[list[tuple]]:
        """Simplices grouped by dimension, each group in lexicographic order."""
        groups = [[] for _ in range(self.dimension + 1)]
        for s in self.simplices:
            groups[len(s) - 1].append(s)
        for g in groups:
            g.sort(key=simplex_key)
        return groups

    @cached_property
    def maximal_simplices(self) -> tuple:
        covered = set()
        for s in self.simplices:
            if len(s) > 1:
                covered.update(facets(s))
        return tuple(sorted(self.simplices - covered, key=simplex_key))

    @cached_property
    def fingerprint(self) -> str:
        return fingerprint(self.simplices)

    def is_downward_closed(self) -> bool:
        return all(f in self.simplices for s in self.simplices for f in facets(s))

    def cofaces(self, s: tuple) -> list[tuple]:
        """Simplices strictly containing ``s`` (linear scan)."""
        ss = set(s)
        return [t for t in self.simplices if len(t) > len(s) and ss.issubset(t)]


def simplex_key(s: tuple):
    return (len(s), tuple(label_key(v) for v in s))


def fingerprint(simplices: Iterable[tuple]) -> str:
    """Order-independent SHA-256 digest of the maximal-simplex set."""
    simplices = set(simplices)
    covered = set()
    for s in simplices:
        if len(s) > 1:
            covered.update(facets(s))
    maximal = sorted(repr(s) for s in simplices - covered)
    return hashlib.sha256("\n".join(maximal).encode()).hexdigest()


def from_simplices(simplices: Iterable[Iterable], dim_cap: int | None = None) -> SimplicialComplex:
    """Downward closure of the given simplices (truncated at ``dim_cap``)."""
    out = set()
    for s in simplices:
        s = simplex(s)
        top = len(s) if dim_cap is None else min(len(s), dim_cap + 1)
        for k in range(1, top + 1):
            out.update(combinations(s, k))
    return SimplicialComplex(frozenset(out), dim_cap)


def empty_complex() -> SimplicialComplex:
    return SimplicialComplex(frozenset())


def full_simplex(vertices: Iterable, dim_cap: int | None = None) -> SimplicialComplex:
    return from_simplices([vertices], dim_cap)


# ---------------------------------------------------------- clique expansion


def _expand_cliques(up: Sequence[int], max_size: int | None) -> list[tuple]:
    """All cliques (as increasing index tuples) of a graph given as bitmasks.

    ``up[i]`` holds the neighbours of ``i`` with index greater than ``i``,
    so every clique is produced exactly once, already in canonical order.
    """
    out = []

    def grow(clique, cand):
        out.append(tuple(clique))
        if max_size is not None and len(clique) >= max_size:
            return
        while cand:
            low = cand & -cand
            j = low.bit_length() - 1
            cand ^= low
            clique.append(j)
            grow(clique, cand & up[j])
            clique.pop()

    for i in range(len(up)):
        grow([i], up[i])
    return out


def maximal_cliques(adj: Sequence[int]) -> list[tuple]:
    """Bron-Kerbosch with pivoting on a bitmask adjacency (``adj[i]`` = all neighbours)."""
    out = []

    def bk(r, p, x):
        if not p and not x:
            out.append(tuple(r))
            return
        pivot_pool = p | x
        pivot = max(_bits(pivot_pool), key=lambda u: bin(adj[u] & p).count("1"))
        for v in _bits(p & ~adj[pivot]):
            bk(r + [v], p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    bk([], (1 << len(adj)) - 1, 0)
    return sorted(tuple(sorted(c)) for c in out)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _threshold_graph(m: FiniteMetricSpace, order: list[int], r, convention: str) -> list[int]:
    n = len(order)
    up = [0] * n
    for a in range(n):
        row = m.dist[order[a]]
        mask = 0
        for b in range(a + 1, n):
            if within(row[order[b]], r, convention):
                mask |= 1 << b
        up[a] = mask
    return up


def vietoris_rips(
    m: FiniteMetricSpace,
    r,
    convention: str = CLOSED,
    dim_cap: int | None = None,
) -> SimplicialComplex:
    """All subsets of diameter <= r (closed) or < r (open), up to ``dim_cap``.

    Built as the clique complex of the threshold graph.
    """
    r = exact(r)
    if not within(0, r, convention):
        return SimplicialComplex(frozenset(), dim_cap)
    order = sorted(range(len(m)), key=lambda i: label_key(m.labels[i]))
    up = _threshold_graph(m, order, r, convention)
    max_size = None if dim_cap is None else dim_cap + 1
    labels = [m.labels[i] for i in order]
    simplices = frozenset(tuple(labels[i] for i in c) for c in _expand_cliques(up, max_size))
    return SimplicialComplex(simplices, dim_cap)


def cech_ambient(
    landmarks: Iterable,
    witnesses: FiniteMetricSpace,
    r,
    convention: str = CLOSED,
    dim_cap: int | None = None,
) -> SimplicialComplex:
    """Landmark subsets with a common witness within ``r`` of every member.

    ``landmarks`` is a collection of labels of ``witnesses`` (or a metric
    space whose labels are used); every point of ``witnesses`` may witness.
    """
    if isinstance(landmarks, FiniteMetricSpace):
        landmarks = landmarks.labels
    landmarks = sort_labels(set(landmarks))
    for l in landmarks:
        if l not in witnesses:
            raise UnknownLandmark(f"landmark {l!r} is not a witness-space point")
    r = exact(r)
    idx = [witnesses.index(l) for l in landmarks]
    balls = set()
    for w in range(len(witnesses)):
        row = witnesses.dist[w]
        ball = tuple(landmarks[p] for p, i in enumerate(idx) if within(row[i], r, convention))
        if ball:
            balls.add(ball)
    return from_simplices(balls, dim_cap)


def clique_complex(k: SimplicialComplex, dim_cap: int | None = None) -> SimplicialComplex:
    """Flag complex of the 1-skeleton of ``k``."""
    verts = sort_labels(k.vertices)
    pos = {v: i for i, v in enumerate(verts)}
    up = [0] * len(verts)
    for s in k.simplices:
        if len(s) == 2:
            a, b = sorted((pos[s[0]], pos[s[1]]))
            up[a] |= 1 << b
    max_size = None if dim_cap is None else dim_cap + 1
    return SimplicialComplex(
        frozenset(tuple(verts[i] for i in c) for c in _expand_cliques(up, max_size)), dim_cap
    )


def _merge_caps(*caps):
    caps = [c for c in caps if c is not None]
    return min(caps) if caps else None


def union_complexes(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    """Union of simplex sets; shared labels are identified."""
    return SimplicialComplex(k1.simplices | k2.simplices, _merge_caps(k1.dim_cap, k2.dim_cap))


def wedge_complexes(k1: SimplicialComplex, b1, k2: SimplicialComplex, b2) -> SimplicialComplex:
    """Identify vertex ``b2`` of ``k2`` with ``b1`` of ``k1``; the result uses ``b1``."""
    if (b1,) not in k1.simplices:
        raise VertexClash(f"{b1!r} is not a vertex of the first complex")
    if (b2,) not in k2.simplices:
        raise VertexClash(f"{b2!r} is not a vertex of the second complex")
    shared = (k1.vertices - {b1}) & (k2.vertices - {b2})
    if b1 != b2 and b1 in k2.vertices:
        shared = shared | {b1}
    if shared:
        raise VertexClash(f"vertex sets overlap outside the basepoint: {sort_labels(shared)!r}")
    renamed = frozenset(simplex(b1 if v == b2 else v for v in s) for s in k2.simplices)
    return SimplicialComplex(k1.simplices | renamed, _merge_caps(k1.dim_cap, k2.dim_cap))


def induced(k: SimplicialComplex, v_subset: Iterable) -> SimplicialComplex:
    keep = set(v_subset)
    return SimplicialComplex(frozenset(s for s in k.simplices if keep.issuperset(s)), k.dim_cap)


def join(k: SimplicialComplex, l: SimplicialComplex) -> SimplicialComplex:
    """Join of complexes on disjoint vertex sets (``K * L``)."""
    if k.vertices & l.vertices:
        raise VertexClash("join needs disjoint vertex sets")
    out = set(k.simplices) | set(l.simplices)
    for s in k.simplices:
        for t in l.simplices:
            out.add(simplex(s + t))
    return SimplicialComplex(frozenset(out))


# ---------------------------------------------------------------- filtrations


@dataclass(frozen=True)
class Filtration:
    """Simplices in insertion order with their entrance scales."""

    entries: tuple  # ((simplex, scale), ...)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def validate(self) -> None:
        seen = {}
        last = None
        for pos, (s, t) in enumerate(self.entries):
            if last is not None and t < last:
                raise InvalidFiltration(f"scale decreases at position {pos}")
            last = t
            if s in seen:
                raise InvalidFiltration(f"simplex {s!r} appears twice")
            for f in facets(s):
                if f not in seen:
                    raise InvalidFiltration(f"face {f!r} of {s!r} appears later or never")
            seen[s] = pos

    def complex_at(self, r, convention: str = CLOSED) -> SimplicialComplex:
        return SimplicialComplex(
            frozenset(s for s, t in self.entries if within(t, r, convention))
        )

    def scales(self) -> list:
        return sorted({t for _, t in self.entries})


def filtration_from_complex(k: SimplicialComplex, scale_of) -> Filtration:
    """Order simplices by (scale, dimension, lexicographic)."""
    entries = [(s, scale_of(s)) for s in k.simplices]
    entries.sort(key=lambda e: (e[1], simplex_key(e[0])))
    return Filtration(tuple(entries))


def vr_filtration(m: FiniteMetricSpace, dim_cap: int | None = None) -> Filtration:
    """Every simplex enters at its diameter; ties by dimension then lexicographic order."""
    full = vietoris_rips(m, m.diameter(), CLOSED, dim_cap)
    pos = {l: i for i, l in enumerate(m.labels)}
    dist = m.dist

    def diam(s):
        best = Fraction(0)
        idx = [pos[v] for v in s]
        for a in range(len(idx)):
            row = dist[idx[a]]
            for b in idx[a + 1:]:
                if row[b] > best:
                    best = row[b]
        return best

    return filtration_from_complex(full, diam)


def critical_scales(m: FiniteMetricSpace) -> list:
    """Distinct pairwise distances (always including 0), increasing."""
    vals = {Fraction(0)}
    for i, row in enumerate(m.dist):
        vals.update(row[i + 1:])
    return sorted(vals)
