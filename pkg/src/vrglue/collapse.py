"""Simplicial collapses and the certificates that record them.

The three ``*_sequence`` producers turn the collapse lemmas into explicit
step lists.  They validate the lemma hypotheses up front and raise
:class:`~vrglue.errors.HypothesisViolation` naming the failed condition.
Independent checking lives in :mod:`vrglue.replay`.
"""
from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    HypothesisViolation,
    NotAFreeFace,
    SigmaNotCollapsible,
    SimplexNotInComplex,
    VRGlueError,
)
from .metric import MetricGraph, label_key, sort_labels
from .simplicial import SimplicialComplex, facets, fingerprint, simplex, simplex_key


@dataclass(frozen=True)
class CollapseStep:
    free_face: tuple
    coface: tuple

    def __post_init__(self):
        if not set(self.free_face) < set(self.coface):
            raise VRGlueError(f"{self.free_face!r} is not a proper face of {self.coface!r}")

    @property
    def elementary(self) -> bool:
        return len(self.coface) == len(self.free_face) + 1


@dataclass(frozen=True)
class CollapseCertificate:
    steps: tuple
    initial_fingerprint: str | None = None
    final_fingerprint: str | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def __add__(self, other: "CollapseCertificate") -> "CollapseCertificate":
        """Chain two certificates (``self`` first)."""
        return CollapseCertificate(
            self.steps + other.steps, self.initial_fingerprint, other.final_fingerprint
        )


# ---------------------------------------------------------------- single steps


def free_face_check(k: SimplicialComplex, tau) -> tuple | None:
    """The unique maximal coface of ``tau`` in ``k`` if it exists and differs from ``tau``.

    Uses downward closure: every coface lies inside ``tau + W`` where ``W``
    is the set of vertices ``w`` with ``tau + {w}`` in ``k``, so a unique
    maximal coface exists exactly when that union is itself a simplex.
    """
    tau = simplex(tau)
    if tau not in k.simplices:
        raise SimplexNotInComplex(f"{tau!r} is not in the complex")
    ext = [w for w in k.vertices if w not in tau and simplex(tau + (w,)) in k.simplices]
    if not ext:
        return None
    sigma = simplex(tau + tuple(ext))
    return sigma if sigma in k.simplices else None


def _interval(tau: tuple, sigma: tuple):
    rest = [v for v in sigma if v not in tau]
    for mask in range(1 << len(rest)):
        extra = tuple(rest[i] for i in range(len(rest)) if mask >> i & 1)
        yield simplex(tau + extra)


def apply_collapse(k: SimplicialComplex, tau, sigma) -> SimplicialComplex:
    """Remove every ``rho`` with ``tau <= rho <= sigma``; ``tau`` must be free in ``sigma``."""
    tau, sigma = simplex(tau), simplex(sigma)
    if free_face_check(k, tau) != sigma:
        raise NotAFreeFace(f"{tau!r} is not a free face of {sigma!r}")
    return SimplicialComplex(k.simplices - set(_interval(tau, sigma)), k.dim_cap)


# ------------------------------------------------------------- greedy search


def greedy_collapse(k: SimplicialComplex) -> tuple[SimplicialComplex, CollapseCertificate]:
    """Elementary collapses until none remain.

    At each step the free face chosen is the lowest-dimensional one, ties
    broken lexicographically.  A one-vertex core certifies collapsibility;
    any other core is inconclusive.
    """
    alive = set(k.simplices)
    cof = defaultdict(set)
    for s in alive:
        for f in facets(s):
            cof[f].add(s)

    def coface_if_free(t):
        c = cof.get(t)
        if c is not None and len(c) == 1:
            (s,) = c
            if not cof.get(s):
                return s
        return None

    heap = [(simplex_key(t), t) for t in alive if coface_if_free(t) is not None]
    heapq.heapify(heap)
    steps = []
    while heap:
        _, t = heapq.heappop(heap)
        if t not in alive:
            continue
        s = coface_if_free(t)
        if s is None:
            continue
        alive.discard(s)
        alive.discard(t)
        touched = []
        for x in (s, t):
            for f in facets(x):
                cof[f].discard(x)
                if f in alive:
                    touched.append(f)
            cof.pop(x, None)
        steps.append(CollapseStep(t, s))
        around = set(touched)
        for f in touched:
            around.update(g for g in facets(f) if g in alive)
        for f in around:
            if coface_if_free(f) is not None:
                heapq.heappush(heap, (simplex_key(f), f))
    core = SimplicialComplex(frozenset(alive), k.dim_cap)
    cert = CollapseCertificate(tuple(steps), k.fingerprint, core.fingerprint)
    return core, cert


def is_collapsible(k: SimplicialComplex) -> bool:
    """True when greedy collapse reaches a single vertex (False is inconclusive)."""
    core, _ = greedy_collapse(k)
    return len(core) == 1


# ------------------------------------------------------------- lemma builders


def _canonical_family(t_simplices) -> list[tuple]:
    return sorted({simplex(s) for s in t_simplices}, key=simplex_key)


def _collapse_order(ts: list[tuple]) -> list[tuple]:
    # largest S first: the complex is built up in nondecreasing |S| order
    return sorted(ts, key=lambda s: (-len(s), tuple(label_key(v) for v in s)))


def _join_simplices(a: tuple, b: tuple) -> tuple:
    return tuple(sorted(a + b, key=label_key))


def gen39_complex(l: SimplicialComplex, sigma, t_simplices) -> SimplicialComplex:
    """``L`` together with every ``tau`` with ``S <= tau <= sigma + S`` for ``S`` in ``T``."""
    sigma = simplex(sigma)
    out = set(l.simplices)
    for s in _canonical_family(t_simplices):
        out.update(_interval(s, _join_simplices(sigma, s)))
    return SimplicialComplex(frozenset(out))


def lemma39_complex(l: SimplicialComplex, a, t_simplices) -> SimplicialComplex:
    return gen39_complex(l, (a,), t_simplices)


def twoplusplus_complex(l: SimplicialComplex, sigma_complex: SimplicialComplex, t_simplices) -> SimplicialComplex:
    out = set(l.simplices)
    tops = sigma_complex.maximal_simplices
    for s in _canonical_family(t_simplices):
        for top in tops:
            out.update(_interval(s, _join_simplices(top, s)))
    return SimplicialComplex(frozenset(out))


def _check_family(l: SimplicialComplex, tops: list[tuple], ts: list[tuple]) -> None:
    base_vertices = {v for top in tops for v in top}
    tset = set(ts)
    for s in ts:
        if base_vertices.intersection(s):
            raise HypothesisViolation("simplex of T meets the cone base", s)
        if s in l.simplices:
            raise HypothesisViolation("simplex of T already lies in L", s)
        for f in facets(s):
            if f in tset:
                continue
            for top in tops:
                if _join_simplices(top, f) not in l.simplices:
                    raise HypothesisViolation(
                        "K is not a simplicial complex (a face of a new simplex is missing)",
                        _join_simplices(top, f),
                    )


def _certificate(l, k_builder, steps, fingerprints: bool) -> CollapseCertificate:
    if not fingerprints:
        return CollapseCertificate(tuple(steps))
    return CollapseCertificate(tuple(steps), k_builder().fingerprint, l.fingerprint)


def lemma39_sequence(l: SimplicialComplex, a, t_simplices, fingerprints: bool = True) -> CollapseCertificate:
    """Elementary collapses ``(S, a + S)`` taking ``L u {S, a + S : S in T}`` down to ``L``."""
    if (a,) not in l.simplices:
        raise HypothesisViolation("apex is not a vertex of L", a)
    ts = _canonical_family(t_simplices)
    for s in ts:
        if a in s:
            raise HypothesisViolation("apex lies in a simplex of T", s)
    _check_family(l, [(a,)], ts)
    steps = [CollapseStep(s, _join_simplices((a,), s)) for s in _collapse_order(ts)]
    return _certificate(l, lambda: lemma39_complex(l, a, ts), steps, fingerprints)


def gen39_sequence(l: SimplicialComplex, sigma, t_simplices, fingerprints: bool = True) -> CollapseCertificate:
    """Collapses ``(S, sigma + S)`` taking the cone-interval extension of ``L`` back to ``L``."""
    sigma = simplex(sigma)
    if sigma not in l.simplices:
        raise HypothesisViolation("sigma is not a simplex of L", sigma)
    ts = _canonical_family(t_simplices)
    _check_family(l, [sigma], ts)
    steps = [CollapseStep(s, _join_simplices(sigma, s)) for s in _collapse_order(ts)]
    return _certificate(l, lambda: gen39_complex(l, sigma, ts), steps, fingerprints)


def twoplusplus_sequence(
    l: SimplicialComplex,
    sigma_complex: SimplicialComplex,
    t_simplices,
    fingerprints: bool = True,
    sigma_certificate: CollapseCertificate | None = None,
) -> CollapseCertificate:
    """Collapse ``L u (Sigma * S for S in T)`` to ``L`` for a collapsible subcomplex ``Sigma``.

    For each ``S`` (largest first) the collapse sequence of ``Sigma`` is
    replayed joined with ``S``, finishing with ``S`` into ``{v} + S`` where
    ``v`` is the vertex ``Sigma`` collapses to.
    """
    if not sigma_complex.simplices:
        raise HypothesisViolation("Sigma is empty")
    missing = [s for s in sigma_complex.simplices if s not in l.simplices]
    if missing:
        raise HypothesisViolation("Sigma is not a subcomplex of L", min(missing, key=simplex_key))
    if sigma_certificate is None:
        core, sigma_certificate = greedy_collapse(sigma_complex)
        if len(core) != 1:
            raise SigmaNotCollapsible(
                f"greedy collapse of Sigma stopped at {len(core)} simplices (inconclusive)"
            )
        (v,) = next(iter(core.simplices))
    else:
        remaining = set(sigma_complex.simplices)
        for st in sigma_certificate.steps:
            remaining -= set(_interval(st.free_face, st.coface))
        if len(remaining) != 1:
            raise SigmaNotCollapsible("supplied Sigma certificate does not end at a vertex")
        (v,) = remaining.pop()
    ts = _canonical_family(t_simplices)
    _check_family(l, list(sigma_complex.maximal_simplices), ts)
    steps = []
    for s in _collapse_order(ts):
        for st in sigma_certificate.steps:
            steps.append(CollapseStep(_join_simplices(st.free_face, s), _join_simplices(st.coface, s)))
        steps.append(CollapseStep(s, _join_simplices((v,), s)))
    return _certificate(l, lambda: twoplusplus_complex(l, sigma_complex, ts), steps, fingerprints)


# ------------------------------------------------------------------ dismantling


def _neighbours(g) -> dict:
    if isinstance(g, MetricGraph):
        return {v: set(nb) for v, nb in g.adjacency().items()}
    if isinstance(g, Mapping):
        return {v: set(nb) for v, nb in g.items()}
    # networkx-like
    return {v: set(g.neighbors(v)) for v in g.nodes}


def is_dominated(g, v, u) -> bool:
    """``v`` is adjacent to ``u`` and every neighbour of ``v`` is ``u`` or a neighbour of ``u``."""
    if v == u:
        raise VRGlueError("a vertex does not dominate itself")
    nb = _neighbours(g)
    return u in nb[v] and nb[v] <= nb[u] | {u}


def dismantle(g) -> list[tuple] | None:
    """Removal order ``[(dominated, dominator), ...]`` reaching one vertex, or None.

    Greedy choice suffices: deleting a dominated vertex leaves a retract,
    and retracts of dismantlable graphs are dismantlable.
    """
    nb = _neighbours(g)
    order = []
    while len(nb) > 1:
        found = None
        for v in sort_labels(nb):
            for u in sort_labels(nb[v]):
                if nb[v] <= nb[u] | {u}:
                    found = (v, u)
                    break
            if found:
                break
        if found is None:
            return None
        v, _ = found
        for w in nb.pop(v):
            nb[w].discard(v)
        order.append(found)
    return order
