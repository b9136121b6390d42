"""
Commands - argparse front end dispatching to the computation modules

Exit codes: 0 success, 1 failed check or other error, 2 parse error,
3 feasibility refusal.
"""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from core import chainmaps, cocycles, functors, groups, resolutions
from core.errors import FeasibilityError, HomocalcError, ParseError, SizeLimitError
from core.settings_manager import get_settings
from resources.report_themes import ReportThemes

from .group_expr import build_group, parse_coefficients, parse_group
from .report_renderer import ReportRenderer, ResultRecord, Timer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3

RESOLUTION_CHOICES = ["auto", "bar", "nbar", "normalized_bar", "homog", "homogeneous", "cyclic"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homocalc",
        description="Exact homology and cohomology of finite groups from explicit free resolutions")
    parser.add_argument("--json", action="store_true", help="machine-readable JSON on stdout")
    parser.add_argument("--report", metavar="FILE", help="also write a markdown (.md) or HTML report")
    parser.add_argument("--theme", default="light", choices=ReportThemes.get_available_themes(),
                        help="HTML report theme")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="only warnings and errors")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("homology", "H_n(G, A)"), ("cohomology", "H^n(G, A)")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("group")
        p.add_argument("degree", type=int)
        p.add_argument("--coeff", default="Z", help="Z, Z/m or Z/m^r (trivial action)")
        p.add_argument("--res", default=None, choices=RESOLUTION_CHOICES)

    p = sub.add_parser("schur", help="Schur multiplier H_2(G, Z)")
    p.add_argument("group")
    p.add_argument("--res", default=None, choices=RESOLUTION_CHOICES)

    p = sub.add_parser("poincare", help="dimensions of H_k(G, Z/p) for k = 1..N")
    p.add_argument("group")
    p.add_argument("prime", type=int)
    p.add_argument("count", type=int)
    p.add_argument("--res", default=None, choices=RESOLUTION_CHOICES)
    p.add_argument("--series", help="rational function to compare against, e.g. '1/(1-x)'")

    p = sub.add_parser("induced", help="map on homology induced by a homomorphism")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--images", required=True, help="generator images, e.g. '(1,2,3),(2,3)'")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--coeff", default="Z")
    p.add_argument("--method", default="lift", choices=["lift", "cell"])
    p.add_argument("--res", default="nbar", choices=["bar", "nbar", "normalized_bar"])

    p = sub.add_parser("res", help="build a resolution and report its ranks")
    p.add_argument("group")
    p.add_argument("--kind", default="auto", choices=RESOLUTION_CHOICES)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--dump", action="store_true", help="include boundary words")
    p.add_argument("--triples", action="store_true", help="dump words as [gen, elt, coeff] triples")

    p = sub.add_parser("verify", help="check d^2 = 0 and exactness of a resolution")
    p.add_argument("group")
    p.add_argument("--kind", default="auto", choices=RESOLUTION_CHOICES)
    p.add_argument("--depth", type=int, default=3)

    p = sub.add_parser("oracle", help="H^1 or H^2 from explicit cocycles")
    p.add_argument("which", choices=["h1", "h2"])
    p.add_argument("group")
    p.add_argument("--coeff", default="Z")
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--compare", action="store_true", help="also compute via a resolution")

    p = sub.add_parser("info", help="order, generators and abelianization")
    p.add_argument("group")
    return parser


# ---------------------------------------------------------------------------
# Command handlers; each returns (records, exit code)
# ---------------------------------------------------------------------------

def _homology(args) -> List[ResultRecord]:
    G = build_group(args.group)
    coeff = parse_coefficients(args.coeff)
    kind = resolutions.resolve_kind(args.res, G)
    record = ResultRecord(args.command, {"group": args.group, "degree": args.degree, "coefficients": str(coeff)},
                          resolution=kind)
    with Timer(record):
        A = coeff.module(G)
        compute = functors.group_homology if args.command == "homology" else functors.group_cohomology
        record.invariants = compute(G, args.degree, A, kind)
    return [record]


def _schur(args) -> List[ResultRecord]:
    G = build_group(args.group)
    kind = resolutions.resolve_kind(args.res, G)
    record = ResultRecord("schur", {"group": args.group}, resolution=kind)
    with Timer(record):
        record.invariants = functors.schur_multiplier(G, kind)
    return [record]


def _poincare(args) -> List[ResultRecord]:
    G = build_group(args.group)
    kind = resolutions.resolve_kind(args.res, G)
    record = ResultRecord("poincare", {"group": args.group, "prime": args.prime, "count": args.count},
                          resolution=kind)
    with Timer(record):
        series = functors.poincare_dims(G, args.prime, args.count, kind)
    record.details.update(series.to_dict())
    record.details["text"] = " ".join(str(d) for d in series.dims)
    if not series.complete:
        record.notes.append(f"truncated at degree {series.truncated_at}: {series.reason}")
    if args.series:
        expected = functors.expand_rational(args.series, len(series.dims))
        record.details["series"] = args.series
        record.details["series_matches"] = expected == series.dims
        record.notes.append(f"series {args.series} expands to {expected}")
    return [record]


def _induced(args) -> List[ResultRecord]:
    src = build_group(args.src)
    tgt = build_group(args.tgt)
    images_expr = parse_group(f"perm:[{args.images}]")
    images = [groups.Permutation.from_cycles(text, tgt.degree) for text in images_expr.generators]
    phi = groups.homomorphism(src, tgt, images)
    coeff = parse_coefficients(args.coeff)
    n = args.degree
    kind = resolutions.resolve_kind(args.res, tgt)
    record = ResultRecord("induced", {"src": args.src, "tgt": args.tgt, "images": args.images, "degree": n,
                                      "coefficients": str(coeff), "method": args.method}, resolution=kind)
    with Timer(record):
        target = resolutions.make_resolution(kind, tgt, n + 1)
        if args.method == "lift":
            source = resolutions.make_resolution("auto", src, n + 1)
            cm = chainmaps.chain_map_lift(source, target, phi)
        else:
            source = resolutions.make_resolution(kind, src, n + 1)
            cm = chainmaps.bar_cell_map(source, target, phi)
        induced = chainmaps.induced_homology_map(cm, n, coeff.module(tgt))
    record.invariants = induced.image_invariants()
    record.details["map"] = induced.to_dict()
    record.details["isomorphism"] = induced.is_isomorphism()
    record.details["text"] = (f"{induced.domain_invariants} -> {induced.codomain_invariants}, "
                              f"image {record.invariants}")
    return [record]


def _res(args) -> List[ResultRecord]:
    G = build_group(args.group)
    kind = resolutions.resolve_kind(args.kind, G)
    record = ResultRecord("res", {"group": args.group, "kind": kind, "depth": args.depth}, resolution=kind)
    with Timer(record):
        R = resolutions.make_resolution(kind, G, args.depth)
        ranks = [R.rank(k) for k in range(args.depth + 1)]
        if args.dump:
            record.details["dump"] = resolutions.dump_resolution(R, triples=args.triples)
    record.details["ranks"] = ranks
    record.details["text"] = "ranks " + " ".join(str(r) for r in ranks)
    return [record]


def _verify(args) -> List[ResultRecord]:
    G = build_group(args.group)
    kind = resolutions.resolve_kind(args.kind, G)
    record = ResultRecord("verify", {"group": args.group, "kind": kind, "depth": args.depth}, resolution=kind)
    with Timer(record):
        report = resolutions.verify_resolution(resolutions.make_resolution(kind, G, args.depth))
    record.details["report"] = report.to_dict()
    record.details["passed"] = report.passed
    record.details["text"] = "passed" if report.passed else "FAILED: " + "; ".join(report.failures)
    return [record]


def _oracle(args) -> List[ResultRecord]:
    G = build_group(args.group)
    coeff = parse_coefficients(args.coeff)
    record = ResultRecord("oracle", {"which": args.which, "group": args.group, "coefficients": str(coeff),
                                     "normalized": args.normalized}, resolution="cocycles")
    with Timer(record):
        A = coeff.module(G)
        compute = cocycles.h1_via_cocycles if args.which == "h1" else cocycles.h2_via_cocycles
        record.invariants = compute(G, A, args.normalized)
        if args.compare:
            degree = 1 if args.which == "h1" else 2
            other = functors.group_cohomology(G, degree, A)
            record.details["resolution_result"] = other.to_dict()
            record.details["agrees"] = other == record.invariants
            if other != record.invariants:
                record.notes.append(f"resolution pipeline gives {other}")
    return [record]


def _info(args) -> List[ResultRecord]:
    G = build_group(args.group)
    record = ResultRecord("info", {"group": args.group})
    with Timer(record):
        record.invariants = groups.abelianization_invariants(G)
    record.details.update({
        "order": G.order,
        "degree": G.degree,
        "generators": [str(g) for g in G.generators],
        "cyclic": G.is_cyclic(),
        "abelian": G.is_abelian(),
    })
    return [record]


HANDLERS = {
    "homology": _homology,
    "cohomology": _homology,
    "schur": _schur,
    "poincare": _poincare,
    "induced": _induced,
    "res": _res,
    "verify": _verify,
    "oracle": _oracle,
    "info": _info,
}


def _emit_error(args, stream: TextIO, error: Exception, renderer: ReportRenderer):
    if getattr(args, "json", False):
        payload = {"command": getattr(args, "command", None), "error": type(error).__name__, "message": str(error)}
        if isinstance(error, FeasibilityError):
            payload.update({"degree": error.degree, "rank": error.rank, "estimate": error.estimate})
        if isinstance(error, ParseError):
            payload["position"] = error.position
        stream.write(renderer.to_json_payload(payload) + "\n")


def run(argv: Optional[List[str]] = None, stream: Optional[TextIO] = None) -> int:
    """Parse argv, run one command and emit its records"""
    stream = stream or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    configure_logging(args)
    renderer = ReportRenderer(stream)
    logger.debug(f"Settings in effect: {get_settings().as_dict()}")
    try:
        records = HANDLERS[args.command](args)
    except ParseError as e:
        logger.error(f"Parse error: {e}")
        _emit_error(args, stream, e, renderer)
        return EXIT_PARSE
    except SizeLimitError as e:
        logger.error(f"Refused: {e}")
        _emit_error(args, stream, e, renderer)
        return EXIT_INFEASIBLE
    except HomocalcError as e:
        logger.error(f"Error: {e}")
        _emit_error(args, stream, e, renderer)
        return EXIT_FAILED

    if args.json:
        renderer.write_json(records)
    else:
        renderer.write_text(records)
    if args.report:
        try:
            renderer.write_report(records, args.report, args.theme)
        except RuntimeError as e:
            logger.error(str(e))
            return EXIT_FAILED
    if any(r.details.get("passed") is False for r in records):
        return EXIT_FAILED
    return EXIT_OK


def configure_logging(args):
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.getLogger().setLevel(level)
