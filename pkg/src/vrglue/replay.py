"""Independent replay of collapse certificates.

Deliberately self-contained: works on plain frozensets of frozensets and
re-derives the free-face test and the fingerprint from scratch, so a bug in
the producers in :mod:`vrglue.collapse` cannot hide itself here.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations


@dataclass
class ReplayResult:
    ok: bool
    steps_applied: int
    reason: str = ""
    final: frozenset | None = None

    def __bool__(self) -> bool:
        return self.ok


def _order(label):
    if isinstance(label, bool):
        return (0, int(label))
    if isinstance(label, (int, Fraction)):
        return (0, label)
    if isinstance(label, str):
        return (1, label)
    if isinstance(label, tuple):
        return (2, tuple(_order(p) for p in label))
    return (3, repr(label))


def _as_sets(simplices) -> set:
    return {frozenset(s) for s in simplices}


def digest(simplices) -> str:
    """Fingerprint of a complex given as any iterable of vertex collections."""
    cx = _as_sets(simplices)
    covered = {s - {v} for s in cx if len(s) > 1 for v in s}
    maximal = cx - covered
    lines = sorted(repr(tuple(sorted(s, key=_order))) for s in maximal)
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


def _closed(cx: set) -> bool:
    for s in cx:
        if len(s) > 1 and any(frozenset(f) not in cx for f in combinations(s, len(s) - 1)):
            return False
    return True


def replay(simplices, certificate, expect_final=None) -> ReplayResult:
    """Apply every step of ``certificate`` to the complex, checking each one.

    A step ``(tau, sigma)`` is accepted when both are present, ``tau`` is a
    proper face of ``sigma`` and no vertex outside ``sigma`` extends ``tau``
    to a simplex.  Under downward closure that last condition says every
    coface of ``tau`` sits inside ``sigma``.
    """
    cx = _as_sets(simplices)
    if not _closed(cx):
        return ReplayResult(False, 0, "initial complex is not downward closed")
    initial = getattr(certificate, "initial_fingerprint", None)
    if initial is not None and digest(cx) != initial:
        return ReplayResult(False, 0, "initial fingerprint mismatch")
    verts = {v for s in cx for v in s}
    steps = getattr(certificate, "steps", certificate)
    for i, step in enumerate(steps):
        tau, sigma = (step.free_face, step.coface) if hasattr(step, "free_face") else step
        tau, sigma = frozenset(tau), frozenset(sigma)
        if tau not in cx or sigma not in cx:
            return ReplayResult(False, i, f"step {i}: simplex missing")
        if not tau < sigma:
            return ReplayResult(False, i, f"step {i}: free face is not a proper face")
        for w in verts - sigma:
            if tau | {w} in cx:
                return ReplayResult(False, i, f"step {i}: coface through {w!r} escapes sigma")
        extra = list(sigma - tau)
        for k in range(len(extra) + 1):
            for more in combinations(extra, k):
                cx.discard(tau.union(more))
    n = len(steps)
    final = getattr(certificate, "final_fingerprint", None)
    if final is not None and digest(cx) != final:
        return ReplayResult(False, n, "final fingerprint mismatch", frozenset(cx))
    if expect_final is not None and cx != _as_sets(expect_final):
        return ReplayResult(False, n, "final complex differs from the expected one", frozenset(cx))
    return ReplayResult(True, n, "", frozenset(cx))
