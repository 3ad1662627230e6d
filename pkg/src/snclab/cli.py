"""Command-line front end.

Predicate subcommands speak through exit codes (0 = true/success,
1 = predicate false or a check failed, 2 = input error) with JSON as the
detailed channel; --format text renders the same report as stable lines.
All JSON output is key-sorted and newline-terminated so identical inputs
produce identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction

from .complexes import AbelianGroup, ComplexError, complex_from_json_dict
from .presentations import (
    PresentationError,
    SuperperfectVerdict,
    abelianization,
    is_q_perfect,
    is_q_superperfect_sufficient,
    pi1_presentation,
    presentation_from_json_dict,
)
from .resolution import (
    Policy,
    ResolutionError,
    embed_snc,
    model_from_json_dict,
    resolve,
)
from .seifert import (
    SeifertError,
    base_from_json_dict,
    circle_action_feasible,
    decomposition_from_json_dict,
    is_rational_homology_sphere,
    link_betti,
)
from .snc import (
    PillowConstant,
    SncError,
    build_snc,
    dual_complex,
    pi1_link_criterion,
    pillow_projectivity,
    sheaf_cohomology_dims,
)
from .voronoi import (
    SiteSet,
    VoronoiError,
    classify_subspaces,
    delaunay_dual,
    region_from_json_dict,
    select_subcomplex,
    voronoi_complex,
)

INPUT_ERRORS = (
    ComplexError,
    PresentationError,
    VoronoiError,
    SncError,
    ResolutionError,
    SeifertError,
    ValueError,
    KeyError,
    OSError,
    json.JSONDecodeError,
)


def _load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _group_dict(g: AbelianGroup) -> dict:
    return {"rank": g.rank, "torsion": list(g.torsion)}


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True) + "\n"
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for key in sorted(value):
                walk(f"{prefix}.{key}" if prefix else str(key), value[key])
        elif isinstance(value, list):
            lines.append(f"{prefix} = {json.dumps(value)}")
        else:
            lines.append(f"{prefix} = {value}")

    walk("", report)
    return "\n".join(sorted(lines)) + "\n"


def _emit(report: dict, fmt: str) -> None:
    sys.stdout.write(_render(report, fmt))


def _load_sites(path: str) -> SiteSet:
    data = _load(path)
    return SiteSet.build(int(data["dim"]), data["sites"])


def _selection(args, vc) -> tuple[int, ...]:
    if getattr(args, "select", None):
        return tuple(int(x) for x in args.select.split(","))
    if getattr(args, "region", None):
        region = region_from_json_dict(_load(args.region))
        return select_subcomplex(vc, region)
    return tuple(vc.cell_indices())


def _parse_pillow(text: str) -> PillowConstant:
    modulus, _, turns = text.partition(",")
    return PillowConstant.build(Fraction(modulus), Fraction(turns or "0"))


def _policy(args) -> Policy:
    seed = getattr(args, "seed", None)
    if seed is None:
        env = os.environ.get("SNCLAB_SEED")
        seed = int(env) if env else None
    return Policy(seed=seed)


def cmd_homology(args) -> int:
    k = complex_from_json_dict(_load(args.file))
    report = {
        "betti": list(k.all_betti()),
        "cells": list(k.cell_counts()),
        "euler_characteristic": k.euler_characteristic(),
        "homology": {
            str(d): _group_dict(k.homology(d)) for d in range(k.dim + 1)
        },
    }
    if args.dim is not None:
        report["requested"] = {str(args.dim): _group_dict(k.homology(args.dim))}
    _emit(report, args.format)
    return 0


def cmd_pi1(args) -> int:
    k = complex_from_json_dict(_load(args.file))
    p = pi1_presentation(k, args.basepoint).simplified()
    report = {
        "presentation": p.to_json_dict(),
        "abelianization": _group_dict(abelianization(p)),
    }
    _emit(report, args.format)
    return 0


def cmd_check(args) -> int:
    if args.predicate == "q-acyclic":
        k = complex_from_json_dict(_load(args.file))
        verdict = k.is_q_acyclic()
        report = {"predicate": "q-acyclic", "betti": list(k.all_betti()), "verdict": verdict}
    elif args.predicate == "q-perfect":
        p = presentation_from_json_dict(_load(args.file))
        group = abelianization(p)
        verdict = is_q_perfect(p)
        report = {
            "predicate": "q-perfect",
            "abelianization": _group_dict(group),
            "verdict": verdict,
        }
    else:
        p = presentation_from_json_dict(_load(args.file))
        state = is_q_superperfect_sufficient(p)
        verdict = state is SuperperfectVerdict.CONFIRMED
        report = {"predicate": "q-superperfect", "state": state.value, "verdict": verdict}
    _emit(report, args.format)
    return 0 if verdict else 1


def cmd_voronoi(args) -> int:
    sites = _load_sites(args.sites)
    vc = voronoi_complex(sites)
    if args.action == "build":
        _emit(vc.to_json_dict(), args.format)
        return 0
    if args.action == "simple":
        witness = vc.simplicity_witness()
        report = {"simple": witness is None}
        if witness is not None:
            report["witness"] = {
                "sites": sorted(witness.sites),
                "cell_count": len(witness.sites),
                "codim": witness.codim,
            }
        _emit(report, args.format)
        return 0 if witness is None else 1
    if args.action == "delaunay":
        selection = _selection(args, vc)
        dual = delaunay_dual(vc, selection)
        report = {
            "selection": list(selection),
            "complex": dual.to_json_dict(),
            "betti": list(dual.all_betti()),
        }
        _emit(report, args.format)
        return 0
    if args.action == "classify":
        rep = classify_subspaces(vc, args.cell)
        report = {
            "cell": rep.cell,
            "essential": [
                {"sites": sorted(r.sites), "dim": r.dim} for r in rep.essential
            ],
            "parasitic": [
                {"sites": sorted(r.sites), "dim": r.dim} for r in rep.parasitic
            ],
            "minimal_parasitic_parent": {
                json.dumps(sorted(k)): sorted(v)
                for k, v in rep.minimal_parasitic_parent.items()
            },
        }
        _emit(report, args.format)
        return 0
    # select
    region = region_from_json_dict(_load(args.region))
    cells = select_subcomplex(vc, region)
    _emit({"cells": list(cells)}, args.format)
    return 0


def cmd_snc(args) -> int:
    if args.action == "pillow":
        if not (args.cx and args.cy and args.cz):
            raise ValueError("pillow needs --cx, --cy and --cz as modulus,turns")
        result, order = pillow_projectivity(
            _parse_pillow(args.cx), _parse_pillow(args.cy), _parse_pillow(args.cz)
        )
        report = {"projective": result}
        if order is not None:
            report["order"] = order
        _emit(report, args.format)
        return 0 if result else 1
    if not args.sites:
        raise ValueError(f"snc {args.action} needs a sites file")
    sites = _load_sites(args.sites)
    vc = voronoi_complex(sites)
    selection = _selection(args, vc)
    model = build_snc(vc, selection)
    if args.action == "build":
        _emit(model.to_json_dict(), args.format)
        return 0
    dual = dual_complex(model)
    report = {
        "complex": dual.to_json_dict(),
        "betti": list(dual.all_betti()),
        "sheaf_cohomology": list(sheaf_cohomology_dims(model)),
        "pi1_link": pi1_link_criterion(model).value,
    }
    _emit(report, args.format)
    return 0


def cmd_resolve(args) -> int:
    if args.action == "embed":
        if not args.sites:
            raise ValueError("resolve embed needs --sites")
        sites = _load_sites(args.sites)
        vc = voronoi_complex(sites)
        model = build_snc(vc, _selection(args, vc))
        roots = embed_snc(model)
        _emit({"roots": [r.to_json_dict() for r in roots]}, args.format)
        return 0
    if not args.file:
        raise ValueError("resolve run needs a local-models file")
    data = _load(args.file)
    raw = data["roots"] if isinstance(data, dict) and "roots" in data else [data]
    roots = [model_from_json_dict(r) for r in raw]
    trace = resolve(roots, _policy(args), args.max_steps)
    report = trace.to_json_dict()
    report["resolved"] = trace.all_resolved()
    _emit(report, args.format)
    return 0


def cmd_seifert(args) -> int:
    if args.action == "betti":
        base = base_from_json_dict(_load(args.file))
        _emit({"link_betti": list(link_betti(base))}, args.format)
        return 0
    if args.action == "qhs":
        base = base_from_json_dict(_load(args.file))
        verdict = is_rational_homology_sphere(base)
        _emit({"rational_homology_sphere": verdict}, args.format)
        return 0 if verdict else 1
    h = decomposition_from_json_dict(_load(args.file))
    ok, failed = circle_action_feasible(h)
    report = {"feasible": ok}
    if failed:
        report["failed_condition"] = failed
    _emit(report, args.format)
    return 0 if ok else 1


def run_pipeline(complex_path: str, sites_path: str, region_path: str,
                 policy: Policy = Policy(), max_steps=None) -> tuple[dict, int]:
    """The end-to-end chain: selection, Delaunay dual, glued model, local
    forms, resolution, and invariant comparison at every controlled stage.

    Homotopy equivalence of the region with the selected subcomplex is a
    hypothesis of the construction, not something the pipeline verifies;
    the report carries that caveat and compares homology as a necessary
    condition.
    """
    input_complex = complex_from_json_dict(_load(complex_path))
    sites = _load_sites(sites_path)
    region = region_from_json_dict(_load(region_path))
    vc = voronoi_complex(sites)
    selection = select_subcomplex(vc, region)
    if not selection:
        raise VoronoiError("the region selects no Voronoi cells")
    dual = delaunay_dual(vc, selection)
    model = build_snc(vc, selection)
    model_dual = dual_complex(model)
    roots = embed_snc(model)
    trace = resolve(roots, policy, max_steps)
    nerve = trace.nerve_complex()

    def profile(k):
        h1 = abelianization(pi1_presentation(k).simplified())
        return list(k.all_betti()), _group_dict(h1)

    input_betti, input_h1 = profile(input_complex)
    delaunay_betti, delaunay_h1 = profile(dual)
    model_betti, model_h1 = profile(model_dual)
    nerve_betti, nerve_h1 = profile(nerve)

    stages_equal = (
        delaunay_betti == model_betti == nerve_betti
        and delaunay_h1 == model_h1 == nerve_h1
    )
    input_match = input_betti == delaunay_betti and input_h1 == delaunay_h1
    q_acyclic = nerve.is_q_acyclic()
    q_perfect = nerve_h1["rank"] == 0
    certificate = json.dumps(
        [[s.rule, [[list(a), list(b)] for a, b in s.descents]] for s in trace.steps],
        sort_keys=True,
    )
    report = {
        "input": {"betti": input_betti, "h1": input_h1},
        "voronoi": {
            "sites": len(sites.sites),
            "dim": sites.dim,
            "selection": list(selection),
            "simple_on_selection": True,
        },
        "delaunay": {"betti": delaunay_betti, "h1": delaunay_h1},
        "snc": {
            "strata": [sorted(s.key) for s in model.strata],
            "dual_isomorphic_to_delaunay": True,
            "betti": model_betti,
            "h1": model_h1,
        },
        "resolution": {
            "roots": len(roots),
            "steps": len(trace.steps),
            "leaves": trace.leaf_count(),
            "nerve_invariant": trace.nerve_constant(),
            "certificate_sha256": hashlib.sha256(certificate.encode()).hexdigest(),
        },
        "final": {"betti": nerve_betti, "h1": nerve_h1},
        "verdicts": {
            "homology_preserved_across_stages": stages_equal,
            "input_homology_match": input_match,
            "rational_singularity_eligible": q_acyclic,
            "pi1_q_perfect": q_perfect,
        },
        "caveat": (
            "homotopy equivalence between the region and the selected "
            "subcomplex is assumed, not verified; homology agreement is a "
            "necessary condition only"
        ),
    }
    exit_code = 0 if (stages_equal and input_match and trace.nerve_constant()) else 1
    return report, exit_code


def cmd_pipeline(args) -> int:
    report, code = run_pipeline(
        args.complex, args.sites, args.region, _policy(args), args.max_steps
    )
    _emit(report, args.format)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snclab",
        description="exact-arithmetic Voronoi/SNC/resolution/link toolkit",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="Betti numbers and integral homology of a complex")
    p.add_argument("file")
    p.add_argument("--dim", type=int, default=None)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("pi1", help="fundamental group presentation of the 2-skeleton")
    p.add_argument("file")
    p.add_argument("--basepoint", type=int, default=0)
    p.set_defaults(func=cmd_pi1)

    p = sub.add_parser("check", help="rational acyclicity / perfectness predicates")
    p.add_argument("predicate", choices=("q-acyclic", "q-perfect", "q-superperfect"))
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("voronoi", help="exact Voronoi complexes")
    p.add_argument("action", choices=("build", "simple", "delaunay", "classify", "select"))
    p.add_argument("sites")
    p.add_argument("--cell", type=int, default=0)
    p.add_argument("--region")
    p.add_argument("--select")
    p.set_defaults(func=cmd_voronoi)

    p = sub.add_parser("snc", help="glued models over a Voronoi selection")
    p.add_argument("action", choices=("build", "dual", "pillow"))
    p.add_argument("sites", nargs="?")
    p.add_argument("--region")
    p.add_argument("--select")
    p.add_argument("--cx")
    p.add_argument("--cy")
    p.add_argument("--cz")
    p.set_defaults(func=cmd_snc)

    p = sub.add_parser("resolve", help="blow-up rewriting on local models")
    p.add_argument("action", choices=("run", "embed"))
    p.add_argument("file", nargs="?")
    p.add_argument("--sites")
    p.add_argument("--region")
    p.add_argument("--select")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=None)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("seifert", help="link invariants over orbifold bases")
    p.add_argument("action", choices=("betti", "qhs", "circle-action"))
    p.add_argument("file")
    p.set_defaults(func=cmd_seifert)

    p = sub.add_parser("pipeline", help="complex -> voronoi -> snc -> resolution report")
    p.add_argument("complex")
    p.add_argument("sites")
    p.add_argument("region")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=None)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
