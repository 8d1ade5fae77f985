"""JSON reading and writing for spaces, graphs, complexes, certificates and diagrams.

Non-integer numbers are parsed straight into :class:`fractions.Fraction`
from their decimal text, so ``0.1`` means exactly one tenth.  Labels that
are JSON arrays become tuples.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

from .collapse import CollapseCertificate, CollapseStep
from .errors import VRGlueError
from .homology import PersistenceDiagram, make_diagram
from .jsonutil import decode_label, encode_exact, encode_label, encode_number, encode_simplex
from .metric import FiniteMetricSpace, MetricGraph, exact, graph_metric, new_finite_metric
from .simplicial import SimplicialComplex, from_simplices, simplex_key


def loads(text: str):
    return json.loads(text, parse_float=Fraction)


def load(path) -> object:
    return loads(Path(path).read_text())


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _num(v):
    if isinstance(v, str):
        if v.lower() in ("inf", "infinity"):
            return math.inf
        return Fraction(v)
    return exact(v)


# ------------------------------------------------------------------ spaces


def metric_from_dict(obj: dict) -> FiniteMetricSpace:
    try:
        labels = [decode_label(l) for l in obj["labels"]]
        matrix = [[_num(v) for v in row] for row in obj["matrix"]]
    except KeyError as exc:
        raise VRGlueError(f"metric JSON needs {exc.args[0]!r}") from None
    return new_finite_metric(labels, matrix, bool(obj.get("pseudo", False)))


def metric_to_dict(m: FiniteMetricSpace) -> dict:
    out = {
        "labels": [encode_label(l) for l in m.labels],
        "matrix": [[encode_exact(v) for v in row] for row in m.dist],
    }
    if m.is_pseudo:
        out["pseudo"] = True
    return out


def graph_from_dict(obj: dict) -> MetricGraph:
    try:
        raw_edges = obj["edges"]
    except KeyError:
        raise VRGlueError("graph JSON needs 'edges'") from None
    edges = []
    for e in raw_edges:
        u, v = decode_label(e[0]), decode_label(e[1])
        edges.append((u, v, _num(e[2]) if len(e) > 2 else 1))
    vertices = [decode_label(v) for v in obj["vertices"]] if "vertices" in obj else None
    sub = obj.get("subdivision", 0)
    if isinstance(sub, list):
        sub = {(decode_label(u), decode_label(v)): int(c) for u, v, c in sub}
    return MetricGraph.from_edges(edges, sub, vertices)


def graph_to_dict(g: MetricGraph) -> dict:
    sub = g.subdivision
    if isinstance(sub, dict):
        sub = [[encode_label(u), encode_label(v), c] for (u, v), c in sub.items()]
    return {
        "vertices": [encode_label(v) for v in g.vertices],
        "edges": [[encode_label(u), encode_label(v), encode_exact(l)] for u, v, l in g.edges],
        "subdivision": sub,
    }


def is_graph_dict(obj) -> bool:
    return isinstance(obj, dict) and "edges" in obj and "matrix" not in obj


def space_from_dict(obj: dict) -> FiniteMetricSpace:
    """A metric JSON, or a graph JSON turned into its sampled shortest-path metric."""
    if is_graph_dict(obj):
        return graph_metric(graph_from_dict(obj))
    if isinstance(obj, dict) and "matrix" in obj:
        return metric_from_dict(obj)
    raise VRGlueError("input must be a metric ({labels, matrix}) or a graph ({edges})")


def split_from_dict(obj: dict):
    """Split space: a glued metric or graph plus ``X`` and ``Y`` label lists,
    or two graphs ``graph_x`` / ``graph_y`` glued along their shared points."""
    from .gluing import new_split_space, split_from_graphs

    if "graph_x" in obj and "graph_y" in obj:
        return split_from_graphs(graph_from_dict(obj["graph_x"]), graph_from_dict(obj["graph_y"]))
    try:
        xs = [decode_label(l) for l in obj["X"]]
        ys = [decode_label(l) for l in obj["Y"]]
    except KeyError as exc:
        raise VRGlueError(f"split JSON needs {exc.args[0]!r}") from None
    return new_split_space(space_from_dict(obj), xs, ys)


def split_to_dict(s) -> dict:
    out = metric_to_dict(s.glued)
    out["X"] = [encode_label(l) for l in s.x_labels]
    out["Y"] = [encode_label(l) for l in s.y_labels]
    return out


# ----------------------------------------------------------------- complexes


def complex_to_dict(k: SimplicialComplex, maximal_only: bool = False) -> dict:
    chosen = k.maximal_simplices if maximal_only else sorted(k.simplices, key=simplex_key)
    return {
        "f_vector": list(k.f_vector),
        "dimension_cap": k.dim_cap,
        "fingerprint": k.fingerprint,
        "maximal_only": maximal_only,
        "simplices": [encode_simplex(s) for s in chosen],
    }


def complex_from_dict(obj: dict) -> SimplicialComplex:
    simplices = obj["simplices"] if isinstance(obj, dict) else obj
    return from_simplices(
        [[decode_label(v) for v in s] for s in simplices],
        obj.get("dimension_cap") if isinstance(obj, dict) else None,
    )


def certificate_to_dict(c: CollapseCertificate) -> dict:
    return {
        "initial_fingerprint": c.initial_fingerprint,
        "final_fingerprint": c.final_fingerprint,
        "steps": [
            {"free": encode_simplex(st.free_face), "coface": encode_simplex(st.coface)}
            for st in c.steps
        ],
    }


def certificate_from_dict(obj) -> CollapseCertificate:
    steps = obj["steps"] if isinstance(obj, dict) else obj
    out = []
    for st in steps:
        free = tuple(decode_label(v) for v in st["free"])
        cof = tuple(decode_label(v) for v in st["coface"])
        out.append(CollapseStep(free, cof))
    if isinstance(obj, dict):
        return CollapseCertificate(
            tuple(out), obj.get("initial_fingerprint"), obj.get("final_fingerprint")
        )
    return CollapseCertificate(tuple(out))


def diagram_to_list(d: PersistenceDiagram) -> list:
    return d.to_list()


def diagram_from_list(items) -> PersistenceDiagram:
    points = {}
    for block in items:
        points[int(block["dim"])] = [(_num(b), _num(dd)) for b, dd in block["points"]]
    return make_diagram(points)
