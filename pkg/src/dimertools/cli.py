"""Command-line surface: validate, matchings, polygon, fan, jigsaw, recipe,
divisors, relations, render, mckay, check-all.

Exit codes: 0 success, 1 invariant or relation failure, 2 input error.
Errors are emitted as JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bundles, fan as fan_mod, jigsaw, matchings, mckay, recipe, render
from .errors import DimerError, InputError, InvariantError
from .io import load_fixture, parse_dimer, serialize_dimer
from .model import DimerModel, dual_quiver, validate_dimer

STAGES = ("validate", "matchings", "fan", "jigsaw", "recipe", "bundles")


@dataclass
class RunManifest:
    source: str  # input path or generator spec
    theta_spec: str = "default"
    zero_vertex: int = 0
    stages: tuple[str, ...] = STAGES
    out_dir: str | None = None
    format_version: str = "1"

    def __post_init__(self):
        order = {s: i for i, s in enumerate(STAGES)}
        ranks = [order[s] for s in self.stages if s in order]
        if sorted(ranks) != ranks or len(set(self.stages)) != len(self.stages):
            raise InputError("stages must respect the pipeline order " + " -> ".join(STAGES))


def _load_model(path: str) -> DimerModel:
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}")
    return parse_dimer(p.read_bytes())


def _theta(args, model) -> fan_mod.StabilityParameter:
    quiver = dual_quiver(model)
    zero = args.zero_vertex
    if args.theta == "default":
        return fan_mod.StabilityParameter.default(len(quiver.vertices), zero, quiver.vertices)
    if args.theta.startswith("@"):
        doc = json.loads(Path(args.theta[1:]).read_text())
        weights = {int(k): Fraction(v) for k, v in doc["weights"].items()}
        return fan_mod.StabilityParameter(doc.get("zero_vertex", zero), weights)
    raise InputError("--theta must be 'default' or @file")


def _emit(payload, args) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}.json").write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_validate(args) -> int:
    model = _load_model(args.model)
    report = validate_dimer(model)
    _emit(report.to_json(), args)
    return 0 if report.valid else 1


def _cmd_matchings(args) -> int:
    model = _load_model(args.model)
    pms = matchings.enumerate_matchings(model)
    if args.count:
        sys.stdout.write(f"{len(pms)}\n")
        return 0
    _emit({"count": len(pms),
           "matchings": [{"edges": list(pm.edges), "height": list(pm.height)} for pm in pms]}, args)
    return 0


def _cmd_polygon(args) -> int:
    model = _load_model(args.model)
    poly = matchings.characteristic_polygon(model)
    _emit(poly.to_json(), args)
    return 0


def _build_fan(args):
    model = _load_model(args.model)
    return fan_mod.build_fan(model, _theta(args, model))


def _cmd_fan(args) -> int:
    _emit(_build_fan(args).to_json(), args)
    return 0


def _cmd_jigsaw(args) -> int:
    f = _build_fan(args)
    try:
        r1, r2 = (int(x) for x in args.tau.split(","))
    except ValueError:
        raise InputError("--tau expects two ray ids, e.g. --tau 3,7") from None
    dec = jigsaw.jigsaw_pieces(f, (r1, r2))
    cert_fwd = jigsaw.jigsaw_transform(f, (r1, r2), "+-")
    cert_bwd = jigsaw.jigsaw_transform(f, (r1, r2), "-+")
    tq = jigsaw.tau_quivers(f, (r1, r2), dec)
    payload = dec.to_json()
    payload["transform"] = [cert_fwd, cert_bwd]
    payload["wall_quivers"] = tq.to_json()
    _emit(payload, args)
    return 0


def _cmd_recipe(args) -> int:
    f = _build_fan(args)
    _emit(recipe.classify_vertices(f).to_json(), args)
    return 0


def _cmd_divisors(args) -> int:
    f = _build_fan(args)
    group = bundles.ClassGroup(f)
    payload = {
        "rays": [{"id": r.id, "point": list(r.point)} for r in f.rays],
        "arrow_divisors": {str(a): list(bundles.arrow_divisor(f, a)) for a in sorted(f.quiver.arrows)},
        "bundle_classes": {str(v): list(bundles.bundle_class(f, v, group).rep) for v in f.quiver.vertices},
        "class_group_rank": group.rank,
    }
    _emit(payload, args)
    return 0


def _cmd_relations(args) -> int:
    f = _build_fan(args)
    rep = recipe.classify_vertices(f)
    rel = bundles.verify_pic_relations(f, rep)
    _emit(rel.to_json(), args)
    return 0 if rel.ok else 1


def _cmd_render(args) -> int:
    f = _build_fan(args)
    rep = recipe.classify_vertices(f)
    doc = render.render(f, rep, args.format)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        suffix = "svg" if args.format == "svg" else "tex"
        (out / f"render.{suffix}").write_text(doc)
    else:
        sys.stdout.write(doc)
    return 0


def _cmd_mckay(args) -> int:
    group = mckay.AbelianGroupData.parse(args.group)
    mck = mckay.mckay_dimer(group)
    report = mckay.crosscheck_recipes(group)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "mckay-dimer.json").write_text(serialize_dimer(mck.model))
        (out / "mckay-crosscheck.json").write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(serialize_dimer(mck.model))
        sys.stdout.write(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return 0 if report.ok else 1


def _cmd_check_all(args) -> int:
    manifest = RunManifest(args.model, args.theta, args.zero_vertex, STAGES, args.out)
    model = _load_model(args.model)
    results: dict = {"manifest": manifest.__dict__ | {"stages": list(manifest.stages)}}
    report = validate_dimer(model)
    results["validate"] = report.to_json()
    if not report.valid:
        _emit(results, args)
        return 1
    pms = matchings.enumerate_matchings(model)
    results["matchings"] = {"count": len(pms)}
    results["consistency"] = matchings.check_consistency(model).to_json()
    f = fan_mod.build_fan(model, _theta(args, model))
    results["fan"] = f.to_json()
    for seg in f.segments:
        jigsaw.jigsaw_transform(f, seg, "+-")
        jigsaw.jigsaw_transform(f, seg, "-+")
        jigsaw.check_crossing_arrows(f, seg)
        jigsaw.check_zero_piece_outflow(f, seg)
        cuts = jigsaw.check_cut_properties(f, seg)
        if not cuts["ok"]:
            raise InvariantError(f"cut lemmas failed on segment {seg}: {cuts['problems']}")
    results["jigsaw"] = {"segments": [list(s) for s in f.segments]}
    rep = recipe.classify_vertices(f)
    results["recipe"] = rep.to_json()
    rel = bundles.verify_pic_relations(f, rep)
    results["relations"] = rel.to_json()
    _emit(results, args)
    return 0 if rel.ok and results["consistency"]["consistent"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dimer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        if model:
            p.add_argument("model", help="path to a dimer JSON file")
        p.add_argument("--theta", default="default", help="'default' or @weights.json")
        p.add_argument("--zero-vertex", type=int, default=0, dest="zero_vertex")
        p.add_argument("--out", default=None, help="directory for JSON reports")

    p = sub.add_parser("validate");  common(p); p.set_defaults(func=_cmd_validate)
    p = sub.add_parser("matchings"); common(p); p.add_argument("--count", action="store_true")
    p.set_defaults(func=_cmd_matchings)
    p = sub.add_parser("polygon");   common(p); p.set_defaults(func=_cmd_polygon)
    p = sub.add_parser("fan");       common(p); p.set_defaults(func=_cmd_fan)
    p = sub.add_parser("jigsaw");    common(p); p.add_argument("--tau", required=True)
    p.set_defaults(func=_cmd_jigsaw)
    p = sub.add_parser("recipe");    common(p); p.set_defaults(func=_cmd_recipe)
    p = sub.add_parser("divisors");  common(p); p.set_defaults(func=_cmd_divisors)
    p = sub.add_parser("relations"); common(p); p.set_defaults(func=_cmd_relations)
    p = sub.add_parser("render");    common(p)
    p.add_argument("--format", choices=("svg", "tikz"), default="svg")
    p.set_defaults(func=_cmd_render)
    p = sub.add_parser("mckay")
    p.add_argument("--group", required=True, help="cyclic spec r:a,b,c (join products with ';')")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_mckay)
    p = sub.add_parser("check-all"); common(p); p.set_defaults(func=_cmd_check_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(json.dumps(exc.details()) + "\n")
        return 2
    except DimerError as exc:
        sys.stderr.write(json.dumps(exc.details()) + "\n")
        return 1
    except OSError as exc:
        sys.stderr.write(json.dumps({"type": "OSError", "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
