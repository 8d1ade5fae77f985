"""Command-line front end.

Exit status: 0 on success, 2 when a theorem hypothesis fails (the report
is still written), 1 on bad input or usage.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import io
from .collapse import greedy_collapse
from .errors import HypothesisFailed, RecipeNotAdmissible, VRGlueError
from .jsonutil import decode_label, encode_label, encode_number
from .metric import GluingSpec, exact, glue_metric, wedge_metric
from .simplicial import CONVENTIONS, cech_ambient, critical_scales, vietoris_rips

SCHEMAS = """\
Input schemas (JSON):
  metric    {"labels": [...], "matrix": [[...]], "pseudo": false}
  graph     {"vertices": [...], "edges": [[u, v, length], ...], "subdivision": 0}
  split     metric-or-graph fields plus {"X": [labels], "Y": [labels]},
            or {"graph_x": graph, "graph_y": graph}
  landmarks metric-or-graph fields plus {"X": [...], "Y": [...], "witnesses": [...]}
  gluing    {"X": metric-or-graph, "Y": metric-or-graph, "A_X": [...], "A_Y": [...]}
  wedge     {"X": metric-or-graph, "Y": metric-or-graph, "base_x": l, "base_y": l}
  complex   {"simplices": [[...], ...]}
  recipe    {"kind": "vertex"|"metric", "subdivision": 0,
             "steps": [{"op": "attach_cycle", "k": 5, "at": [0]}, ...]}
"""

HYPOTHESIS_FAILED = 2
INPUT_ERROR = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{SCHEMAS}")
        raise SystemExit(INPUT_ERROR)


class _Fail(Exception):
    """Carries a JSON payload for exit status 2."""

    def __init__(self, payload):
        self.payload = payload


def _scale(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("scale must be >= 0")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _scales(args, space) -> list:
    if args.scales is None:
        if args.scale is None:
            raise VRGlueError("give --scale or --scales")
        return [args.scale]
    if args.scales == "all":
        return critical_scales(space)
    return [_scale(t) for t in args.scales.split(",") if t.strip()]


def _labels(text: str | None):
    if text is None:
        return None
    out = []
    for t in text.split(","):
        t = t.strip()
        try:
            out.append(decode_label(json.loads(t)))
        except json.JSONDecodeError:
            out.append(t)
    return out


# ------------------------------------------------------------------ commands


def cmd_vr(args):
    space = io.space_from_dict(io.load(args.input))
    results = []
    for r in _scales(args, space):
        if args.betti:
            from .homology import betti

            k = vietoris_rips(space, r, args.convention, args.max_dim + 1)
            results.append({"r": encode_number(r), "betti": list(betti(k, args.max_dim))})
        else:
            k = vietoris_rips(space, r, args.convention, args.max_dim)
            results.append({"r": encode_number(r), **io.complex_to_dict(k, args.maximal)})
    return results[0] if args.scales is None else {"scales": results}


def cmd_cech(args):
    obj = io.load(args.input)
    space = io.space_from_dict(obj)
    landmarks = _labels(args.landmarks) or [decode_label(l) for l in obj.get("landmarks", space.labels)]
    if args.betti:
        from .homology import betti

        k = cech_ambient(landmarks, space, args.scale, args.convention, args.max_dim + 1)
        return {"betti": list(betti(k, args.max_dim))}
    k = cech_ambient(landmarks, space, args.scale, args.convention, args.max_dim)
    return io.complex_to_dict(k, args.maximal)


def cmd_glue(args):
    obj = io.load(args.input)
    x, y = io.space_from_dict(obj["X"]), io.space_from_dict(obj["Y"])
    ax = [decode_label(l) for l in obj["A_X"]]
    ay = [decode_label(l) for l in obj.get("A_Y", obj["A_X"])]
    from .gluing import split_from_gluing

    return io.split_to_dict(split_from_gluing(x, y, GluingSpec(ax, ay)))


def cmd_wedge(args):
    obj = io.load(args.input)
    x, y = io.space_from_dict(obj["X"]), io.space_from_dict(obj["Y"])
    bx, by = decode_label(obj["base_x"]), decode_label(obj["base_y"])
    from .gluing import split_from_gluing

    return io.split_to_dict(split_from_gluing(x, y, GluingSpec((bx,), (by,))))


def cmd_betti(args):
    from .homology import betti

    obj = io.load(args.input)
    if isinstance(obj, list) or "simplices" in obj:
        k = io.complex_from_dict(obj)
    else:
        if args.scale is None:
            raise VRGlueError("a space input needs --scale")
        k = vietoris_rips(io.space_from_dict(obj), args.scale, args.convention, args.max_dim + 1)
    return {"betti": list(betti(k, args.max_dim))}


def cmd_ph(args):
    from .homology import vr_persistence

    space = io.space_from_dict(io.load(args.input))
    return {"diagram": vr_persistence(space, args.max_dim).to_list()}


def cmd_collapse(args):
    k = io.complex_from_dict(io.load(args.input))
    if args.verify:
        from .replay import replay

        cert = io.certificate_from_dict(io.load(args.verify))
        res = replay(k.simplices, cert)
        out = {"valid": res.ok, "steps_applied": res.steps_applied, "reason": res.reason}
        if not res.ok:
            raise _Fail(out)
        return out
    core, cert = greedy_collapse(k)
    return {
        "collapsible": len(core) == 1,
        "verdict": "collapsible" if len(core) == 1 else "inconclusive",
        "core": io.complex_to_dict(core, maximal_only=True),
        "certificate": io.certificate_to_dict(cert),
    }


def cmd_verify_gluing(args):
    from .gluing import verify_gluing_equivalence

    s = io.split_from_dict(io.load(args.input))
    failed = False
    results = []
    for r in _scales(args, s.glued):
        try:
            res = verify_gluing_equivalence(s, r, args.mode or "auto", args.convention, args.max_dim)
        except HypothesisFailed as exc:
            failed = True
            results.append({"r": encode_number(r), "error": str(exc), "hypothesis": exc.report.to_dict()})
            continue
        entry = {"r": encode_number(r), **res.to_dict()}
        if not args.full_certificate and "certificate" in entry:
            entry["certificate"]["steps"] = len(res.certificate)
        results.append(entry)
        failed = failed or res.fallback
    out = results[0] if args.scales is None else {"scales": results}
    if failed:
        raise _Fail(out)
    return out


def cmd_condition_r(args):
    from .gluing import cech_condition_r

    obj = io.load(args.input)
    space = io.space_from_dict(obj)
    xs = _labels(args.x_landmarks) or [decode_label(l) for l in obj["X"]]
    ys = _labels(args.y_landmarks) or [decode_label(l) for l in obj["Y"]]
    wit = obj.get("witnesses")
    wit = None if wit is None else [decode_label(w) for w in wit]
    rep = cech_condition_r(space, xs, ys, args.scale, wit, args.convention, args.max_dim if args.cap else None)
    out = rep.to_dict(all_records=args.all)
    if rep.verdict != "unique-nonempty":
        raise _Fail(out)
    return out


def cmd_family(args):
    from .families import build_recipe, recipe_from_dict
    from .homology import diagrams_equal, predicted_diagram, vr_persistence

    recipe = recipe_from_dict(io.load(args.input))
    try:
        built = build_recipe(recipe)
    except RecipeNotAdmissible as exc:
        payload = {"admissible": False, "error": str(exc)}
        if exc.report is not None:
            payload["report"] = exc.report.to_dict()
        raise _Fail(payload)
    out = {"admissible": True, **built.to_dict()}
    if args.compare:
        got = vr_persistence(built.metric, args.max_dim).restrict(1)
        want = predicted_diagram(recipe, args.max_dim, args.convention).restrict(1)
        cmp = diagrams_equal(got, want)
        out["diagram"] = got.to_list()
        out["predicted"] = want.to_list()
        out["match"] = cmp.equal
    return out


def cmd_ladder(args):
    from .families import build_circular_ladder, verify_sup_theorem

    lad = build_circular_ladder(
        args.rungs,
        args.circumference,
        args.rings,
        args.width,
        args.circle_points,
        args.segment_points,
    )
    results = []
    for r in _scales(args, lad.sup):
        rep = verify_sup_theorem(lad.x, lad.x0, lad.y, lad.y0, r, args.max_dim, args.convention)
        entry = {"points_sup": len(lad.sup), **rep.to_dict()}
        if args.graph:
            from .homology import betti

            k = vietoris_rips(lad.graph_space, r, args.convention, args.max_dim + 1)
            entry["betti_graph"] = list(betti(k, args.max_dim))
        results.append(entry)
    return results[0] if args.scales is None else {"scales": results}


def cmd_predict(args):
    from .families import recipe_from_dict
    from .homology import predicted_diagram

    recipe = recipe_from_dict(io.load(args.input))
    try:
        d = predicted_diagram(recipe, args.max_dim, args.convention)
    except RecipeNotAdmissible as exc:
        payload = {"admissible": False, "error": str(exc)}
        if exc.report is not None:
            payload["report"] = exc.report.to_dict()
        raise _Fail(payload)
    return {"diagram": d.to_list()}


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vrglue", description="Vietoris-Rips gluing toolkit", epilog=SCHEMAS,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, input=True, scale=False, scales=False, max_dim=1, mode=False):
        if input:
            sp.add_argument("--input", required=True, help="input JSON file")
        if scale or scales:
            sp.add_argument("--scale", type=_scale, required=scale and not scales, help="scale r")
        if scales:
            sp.add_argument("--scales", help="'all' (critical scales) or a comma list")
        sp.add_argument("--convention", choices=CONVENTIONS, default="closed")
        sp.add_argument("--max-dim", type=_nonneg_int, default=max_dim, dest="max_dim")
        if mode:
            sp.add_argument("--mode", choices=["certificate", "betti"], default=None)
        sp.add_argument("--output", help="write JSON here instead of standard output")
        sp.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs single-threaded")

    sp = sub.add_parser("vr", help="Vietoris-Rips complex or its Betti numbers")
    common(sp, scales=True)
    sp.add_argument("--betti", action="store_true")
    sp.add_argument("--maximal", action="store_true", help="list maximal simplices only")
    sp.set_defaults(func=cmd_vr)

    sp = sub.add_parser("cech", help="ambient Cech complex on landmarks")
    common(sp, scale=True)
    sp.add_argument("--landmarks", help="comma list of landmark labels (default: all points)")
    sp.add_argument("--betti", action="store_true")
    sp.add_argument("--maximal", action="store_true")
    sp.set_defaults(func=cmd_cech)

    sp = sub.add_parser("glue", help="metric gluing of two spaces along A")
    common(sp)
    sp.set_defaults(func=cmd_glue)

    sp = sub.add_parser("wedge", help="wedge sum of two pointed spaces")
    common(sp)
    sp.set_defaults(func=cmd_wedge)

    sp = sub.add_parser("betti", help="Betti numbers of a complex, or of VR at --scale")
    common(sp, scales=False)
    sp.add_argument("--scale", type=_scale)
    sp.set_defaults(func=cmd_betti)

    sp = sub.add_parser("ph", help="persistence diagram of the VR filtration")
    common(sp)
    sp.set_defaults(func=cmd_ph)

    sp = sub.add_parser("collapse", help="greedy collapse, or replay a certificate with --verify")
    common(sp)
    sp.add_argument("--verify", help="certificate JSON to replay against the input complex")
    sp.set_defaults(func=cmd_collapse)

    sp = sub.add_parser("verify-gluing", help="compare VR of the glued space with the union of the sides")
    common(sp, scales=True, max_dim=2, mode=True)
    sp.add_argument("--full-certificate", action="store_true", help="emit every collapse step")
    sp.set_defaults(func=cmd_verify_gluing)

    sp = sub.add_parser("condition-r", help="Cech Condition-R over a witness set")
    common(sp, scale=True, max_dim=3)
    sp.add_argument("--x-landmarks", dest="x_landmarks")
    sp.add_argument("--y-landmarks", dest="y_landmarks")
    sp.add_argument("--cap", action="store_true", help="cap |S_X|+|S_Y| at max-dim + 1")
    sp.add_argument("--all", action="store_true", help="report every pair, not just failures")
    sp.set_defaults(func=cmd_condition_r)

    sp = sub.add_parser("family", help="build an iterated-gluing recipe")
    common(sp)
    sp.add_argument("--compare", action="store_true", help="compare the VR diagram with the prediction")
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("ladder", help="circular ladder and the sup-metric comparison")
    common(sp, input=False, scales=True, max_dim=2)
    sp.add_argument("--rungs", type=int, required=True)
    sp.add_argument("--circumference", type=_scale)
    sp.add_argument("--rings", type=int, default=2)
    sp.add_argument("--width", type=_scale, default=Fraction(1))
    sp.add_argument("--circle-points", type=int, dest="circle_points")
    sp.add_argument("--segment-points", type=int, dest="segment_points")
    sp.add_argument("--graph", action="store_true", help="also report Betti numbers in the graph metric")
    sp.set_defaults(func=cmd_ladder)

    sp = sub.add_parser("predict", help="predicted diagram of a recipe")
    common(sp)
    sp.set_defaults(func=cmd_predict)
    return p


def _emit(payload, output) -> None:
    text = io.dumps(payload)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = args.func(args)
    except _Fail as exc:
        _emit(exc.payload, getattr(args, "output", None))
        return HYPOTHESIS_FAILED
    except (VRGlueError, KeyError, TypeError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"vrglue: error: {msg}\n")
        return INPUT_ERROR
    _emit(payload, args.output)
    return 0


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
