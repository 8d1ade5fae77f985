"""Mod-2 homology and persistence.

Chains are Python ints used as bit vectors, so column additions are XORs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import DimensionCapTooLow
from .jsonutil import encode_number
from .simplicial import CLOSED, Filtration, SimplicialComplex, facets, vr_filtration

INF = math.inf


def _rank(columns: list[int]) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            other = pivots.get(top)
            if other is None:
                pivots[top] = col
                rank += 1
                break
            col ^= other
    return rank


def betti(k: SimplicialComplex, cap: int) -> tuple:
    """Unreduced Betti numbers of ``k`` in dimensions ``0..cap``."""
    if cap < 0:
        return ()
    if k.dim_cap is not None and k.dim_cap < cap + 1:
        raise DimensionCapTooLow(
            f"Betti numbers up to dimension {cap} need simplices of dimension {cap + 1}; "
            f"complex is truncated at {k.dim_cap}"
        )
    groups = k.by_dimension()
    groups += [[] for _ in range(cap + 2 - len(groups))]
    index = [{s: i for i, s in enumerate(g)} for g in groups]
    ranks = [0] * (cap + 2)  # ranks[d] = rank of the boundary map out of dimension d
    for d in range(1, cap + 2):
        below = index[d - 1]
        cols = []
        for s in groups[d]:
            c = 0
            for f in facets(s):
                c |= 1 << below[f]
            cols.append(c)
        ranks[d] = _rank(cols)
    return tuple(len(groups[d]) - ranks[d] - ranks[d + 1] for d in range(cap + 1))


betti_vector = betti


# ------------------------------------------------------------------ diagrams


@dataclass(frozen=True)
class PersistenceDiagram:
    """Points per dimension, each list sorted; deaths may be ``math.inf``."""

    points: dict = field(default_factory=dict)

    def dim(self, i: int) -> list:
        return self.points.get(i, [])

    def dims(self) -> list[int]:
        return sorted(i for i, pts in self.points.items() if pts)

    def restrict(self, min_dim: int = 0, max_dim: int | None = None) -> "PersistenceDiagram":
        return PersistenceDiagram(
            {
                i: list(p)
                for i, p in self.points.items()
                if i >= min_dim and (max_dim is None or i <= max_dim)
            }
        )

    def to_list(self) -> list[dict]:
        return [
            {"dim": i, "points": [[encode_number(b), encode_number(d)] for b, d in self.dim(i)]}
            for i in sorted(self.points)
        ]


def _sort_points(pts):
    return sorted(pts, key=lambda p: (p[0], p[1]))


def make_diagram(points: dict) -> PersistenceDiagram:
    return PersistenceDiagram({i: _sort_points(p) for i, p in points.items()})


def merge_diagrams(*diagrams: PersistenceDiagram) -> PersistenceDiagram:
    out: dict = {}
    for d in diagrams:
        for i, pts in d.points.items():
            out.setdefault(i, []).extend(pts)
    return make_diagram(out)


def persistence(f: Filtration, cap: int) -> PersistenceDiagram:
    """Standard column reduction; zero-length intervals are dropped."""
    f.validate()
    entries = list(f)
    index = {s: i for i, (s, _) in enumerate(entries)}
    low_owner: dict[int, int] = {}
    reduced: list[int] = []
    paired = set()
    out: dict = {i: [] for i in range(cap + 1)}
    for j, (s, t) in enumerate(entries):
        col = 0
        for g in facets(s):
            col |= 1 << index[g]
        while col:
            low = col.bit_length() - 1
            other = low_owner.get(low)
            if other is None:
                break
            col ^= reduced[other]
        reduced.append(col)
        if col:
            low = col.bit_length() - 1
            low_owner[low] = j
            paired.add(low)
            paired.add(j)
            birth_s, birth_t = entries[low]
            dim = len(birth_s) - 1
            if dim <= cap and birth_t != t:
                out[dim].append((birth_t, t))
    for j, (s, t) in enumerate(entries):
        dim = len(s) - 1
        if j not in paired and reduced[j] == 0 and dim <= cap:
            out[dim].append((t, INF))
    return make_diagram(out)


def vr_persistence(m, cap: int) -> PersistenceDiagram:
    """Diagram of the full Vietoris-Rips filtration of ``m`` in dimensions ``0..cap``."""
    return persistence(vr_filtration(m, cap + 1), cap)


@dataclass(frozen=True)
class DiagramComparison:
    equal: bool
    witness: tuple | None = None  # (dim, point in first or None, point in second or None)

    def __bool__(self) -> bool:
        return self.equal


def _close(a, b, tol) -> bool:
    if a == b:
        return True
    if math.isinf(a) or math.isinf(b):
        return False
    return abs(float(a) - float(b)) <= tol


def diagrams_equal(d1: PersistenceDiagram, d2: PersistenceDiagram, tol: float = 0.0) -> DiagramComparison:
    """Multiset equality up to ``tol`` per coordinate, matching points in sorted order."""
    for i in sorted(set(d1.points) | set(d2.points)):
        p1, p2 = d1.dim(i), d2.dim(i)
        for a, b in zip(p1, p2):
            if not (_close(a[0], b[0], tol) and _close(a[1], b[1], tol)):
                return DiagramComparison(False, (i, a, b))
        if len(p1) != len(p2):
            extra = p1[len(p2)] if len(p1) > len(p2) else None
            other = p2[len(p1)] if len(p2) > len(p1) else None
            return DiagramComparison(False, (i, extra, other))
    return DiagramComparison(True)


# ---------------------------------------------------------- predicted diagrams


@lru_cache(maxsize=None)
def cycle_diagram(k: int, subdivision: int = 0, convention: str = CLOSED, cap: int = 1) -> PersistenceDiagram:
    """Diagram (dimensions ``1..cap``) of the sampled unit-edge cycle ``C_k``."""
    from .metric import sample_circle

    m = sample_circle(k, k * (subdivision + 1))
    return vr_persistence(m, cap).restrict(1)


def predicted_diagram(recipe, cap: int = 1, convention: str = CLOSED) -> PersistenceDiagram:
    """Union of the per-cycle diagrams of a wedge-decomposable recipe, plus one ``(0, inf)``.

    ``recipe`` is anything with a ``cycles()`` method returning
    ``(k, subdivision)`` pairs (its ``validate()`` is called first when
    present), or a plain iterable of such pairs.
    """
    if hasattr(recipe, "validate"):
        recipe.validate()
    cycles = recipe.cycles() if hasattr(recipe, "cycles") else list(recipe)
    parts = [cycle_diagram(int(k), int(sub), convention, cap) for k, sub in cycles]
    base = PersistenceDiagram({0: [(Fraction(0), INF)]})
    return merge_diagrams(base, *parts)
