"""Command-line interface.  Every command prints JSON on stdout.

Exit codes: 0 success or preserved, 1 preservation violated, 2 hypothesis
violated, 64 usage error, 65 data error, 70 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import rational as R
from .errors import HypothesisViolated, InternalError, InvalidInput
from .faces import face_report, smoothness_order
from .kset import (
    KINDS,
    RHO_EXAMPLE,
    SearchConfig,
    equivalence_matrix,
    falsification_search,
    reproduce_counterexamples,
)
from .operators import (
    is_bijective,
    is_scalar_isometry,
    isometry_witness,
    load_operator,
    operator_norm,
    parse_operator,
)
from .ortho import RELATIONS, orthogonality_report
from .preservation import preserves_bj_on, preserving_set_scan, preserves_bj_at
from .space import dual_space, load_space, save_space, space_from_facets, space_from_vertices, space_to_dict
from .spaces import named_space

EXIT_OK, EXIT_VIOLATED, EXIT_HYPOTHESIS = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 64, 65, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _space(ref: str):
    if os.path.exists(ref):
        return load_space(ref)
    return named_space(ref)


def _operator(ref: str):
    if os.path.exists(ref):
        return load_operator(ref)
    return parse_operator(ref)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _seed(arg: int) -> int:
    env = os.environ.get("BJLAB_SEED")
    if env is None or env == "":
        return arg
    try:
        return int(env)
    except ValueError:
        raise InvalidInput(f"BJLAB_SEED must be an integer, got {env!r}")


# -- commands ----------------------------------------------------------------

def cmd_space_new(args):
    if (args.vertices is None) == (args.facets is None):
        raise UsageError("give exactly one of --vertices and --facets")
    if args.vertices is not None:
        pts = R.parse_vec_list(args.vertices)
        space = space_from_vertices(args.dim or len(pts[0]), pts)
    else:
        fs = R.parse_vec_list(args.facets)
        space = space_from_facets(args.dim or len(fs[0]), fs)
    if args.out:
        save_space(space, args.out)
    _emit(space_to_dict(space))
    return EXIT_OK


def cmd_space_info(args):
    space = _space(args.space)
    lattice = space.face_lattice
    _emit({
        "dim": space.dim,
        "vertices": len(space.vertices),
        "facets": len(space.facets),
        "faces": len(lattice),
        "f_vector": [sum(1 for f in lattice if f.dim == d) for d in range(space.dim)],
    })
    return EXIT_OK


def cmd_space_dual(args):
    dual = dual_space(_space(args.space))
    if args.out:
        save_space(dual, args.out)
    _emit(space_to_dict(dual))
    return EXIT_OK


def cmd_faces(args):
    space = _space(args.space)
    out = {}
    for f in space.face_lattice:
        out.setdefault(str(f.dim), []).append([R.fmt_vec(space.vertices[i]) for i in sorted(f.vertex_ids)])
    _emit({"dim": space.dim, "faces": out})
    return EXIT_OK


def cmd_smooth_order(args):
    space = _space(args.space)
    x = R.parse_vec(args.point)
    report = face_report(space, x)
    report["order"] = smoothness_order(space, x)
    _emit(report)
    return EXIT_OK


def cmd_ortho_check(args):
    space = _space(args.space)
    u, v = R.parse_vec(args.u), R.parse_vec(args.v)
    report = orthogonality_report(space, u, v)
    if args.relation:
        report["relation"] = args.relation
        report["verdict"] = RELATIONS[args.relation](space, u, v)
    _emit(report)
    return EXIT_OK


def cmd_op_isometry(args):
    space = _space(args.space)
    t = _operator(args.op)
    lam = is_scalar_isometry(space, t)
    w = isometry_witness(space, t)
    _emit({
        "operator": t.to_dict()["matrix"],
        "scalar_isometry": lam is not None,
        "lambda": None if lam is None else str(lam),
        "bijective": is_bijective(t),
        "operator_norm": str(operator_norm(space, t)),
        "witness": None if w is None else R.fmt_vec(w),
    })
    return EXIT_OK


def cmd_preserve_at(args):
    space = _space(args.space)
    cert = preserves_bj_at(space, _operator(args.op), R.parse_vec(args.point))
    _emit(cert.to_dict())
    return EXIT_OK if cert.verdict else EXIT_VIOLATED


def cmd_preserve_on(args):
    space = _space(args.space)
    ok, certs = preserves_bj_on(space, _operator(args.op), R.parse_vec_list(args.points), collect_all=True)
    _emit({"verdict": ok, "certificates": [c.to_dict() for c in certs]})
    return EXIT_OK if ok else EXIT_VIOLATED


def cmd_preserve_scan(args):
    space = _space(args.space)
    report = preserving_set_scan(space, _operator(args.op), samples=args.samples, exact=not args.sampled)
    _emit(report)
    return EXIT_OK if report["preserved_everywhere"] else EXIT_VIOLATED


def cmd_kset_search(args):
    space = _space(args.space)
    config = SearchConfig(
        space=space,
        kind=args.candidates,
        k=args.k,
        points=tuple(R.parse_vec_list(args.points)) if args.points else (),
        hyperplane=R.parse_vec(args.hyperplane) if args.hyperplane else None,
        budget=args.budget,
        seed=_seed(args.seed),
        height=args.height,
        exact=not args.centroids,
        space_name=args.space,
    )
    report = falsification_search(config)
    _emit(report.to_dict(timing=not args.no_timing))
    return EXIT_OK


def cmd_kset_repro(args):
    t = _operator(args.rho_op) if args.rho_op else RHO_EXAMPLE
    _emit(reproduce_counterexamples(rho_operator=t))
    return EXIT_OK


def cmd_kset_matrix(args):
    row = equivalence_matrix(_space(args.space), _operator(args.op))
    _emit(row)
    if row["violation"]:
        sys.stderr.write("equivalence pattern violated; see the reported row\n")
        return EXIT_INTERNAL
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bjlab", description="Exact orthogonality experiments on polyhedral normed spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_space(sp):
        sp.add_argument("--space", required=True, help="space JSON file or bundled name (linf2, l1_3, linf:4, ...)")
        return sp

    sp = sub.add_parser("space", help="create and inspect spaces")
    ssub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    new = ssub.add_parser("new", help="build a space from vertices or facet functionals")
    new.add_argument("--vertices", help='points, e.g. "1,1;1,-1"; negatives are added')
    new.add_argument("--facets", help="facet functionals in the same format")
    new.add_argument("--dim", type=int)
    new.add_argument("--out")
    new.set_defaults(func=cmd_space_new)
    with_space(ssub.add_parser("info")).set_defaults(func=cmd_space_info)
    dual = with_space(ssub.add_parser("dual"))
    dual.add_argument("--out")
    dual.set_defaults(func=cmd_space_dual)

    with_space(sub.add_parser("faces", help="face lattice grouped by dimension")).set_defaults(func=cmd_faces)

    so = with_space(sub.add_parser("smooth-order", help="smoothness order and minimal face of a point"))
    so.add_argument("point")
    so.set_defaults(func=cmd_smooth_order)

    op = sub.add_parser("ortho", help="orthogonality relations")
    osub = op.add_subparsers(dest="action", required=True, parser_class=_Parser)
    chk = with_space(osub.add_parser("check"))
    chk.add_argument("--u", required=True)
    chk.add_argument("--v", required=True)
    chk.add_argument("--relation", choices=sorted(RELATIONS))
    chk.set_defaults(func=cmd_ortho_check)

    opp = sub.add_parser("op", help="operator queries")
    opsub = opp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    iso = with_space(opsub.add_parser("check-isometry"))
    iso.add_argument("--op", required=True, help='operator JSON file or rows, e.g. "0,3;3,0"')
    iso.set_defaults(func=cmd_op_isometry)

    pp = sub.add_parser("preserve", help="orthogonality preservation")
    psub = pp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    at = with_space(psub.add_parser("at"))
    at.add_argument("--op", required=True)
    at.add_argument("--point", required=True)
    at.set_defaults(func=cmd_preserve_at)
    on = with_space(psub.add_parser("on"))
    on.add_argument("--op", required=True)
    on.add_argument("--points", required=True)
    on.set_defaults(func=cmd_preserve_on)
    scan = with_space(psub.add_parser("scan"))
    scan.add_argument("--op", required=True)
    scan.add_argument("--samples", type=int, default=2)
    scan.add_argument("--sampled", action="store_true", help="skip the exact relative-interior decision")
    scan.set_defaults(func=cmd_preserve_scan)

    kp = sub.add_parser("kset", help="K-set experiments")
    ksub = kp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    srch = with_space(ksub.add_parser("search"))
    srch.add_argument("--candidates", choices=KINDS, default="extreme")
    srch.add_argument("--k", type=int)
    srch.add_argument("--points")
    srch.add_argument("--hyperplane")
    srch.add_argument("--budget", type=int, default=1000)
    srch.add_argument("--seed", type=int, default=0)
    srch.add_argument("--height", type=int, default=8)
    srch.add_argument("--centroids", action="store_true", help="use face centroids instead of whole interiors")
    srch.add_argument("--no-timing", action="store_true", help="omit wall time for byte-identical output")
    srch.set_defaults(func=cmd_kset_search)
    rep = ksub.add_parser("repro")
    rep.add_argument("--rho-op", help="replace the operator of the first scenario")
    rep.set_defaults(func=cmd_kset_repro)
    mat = with_space(ksub.add_parser("matrix"))
    mat.add_argument("--op", required=True)
    mat.set_defaults(func=cmd_kset_matrix)
    return p


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except HypothesisViolated as exc:
        sys.stderr.write(f"hypothesis violated: {exc}\n")
        return EXIT_HYPOTHESIS
    except InternalError as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL
    except (InvalidInput, OSError, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"data error: {exc}\n")
        return EXIT_DATA


def main() -> None:
    sys.exit(cli_main())
