"""Command line interface: ``helly-lattice <subcommand> ...``.

Exit status: 0 success, 1 verification failure, 2 usage error,
3 precision exhausted or undecided rational relation.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bounds, constructions, documents
from .contfrac import Side, best_one_sided, cf_expand, convergents
from .kernel import CertificationFailed, is_empty_polygon
from .lattice import Window, parse_lattice
from .render import render_svg
from .scalar import PrecisionExhausted, format_scalar, parse_scalar, precision
from .search import SearchConfig, WindowTooLargeForNaive, max_empty_polygon

EXIT_OK = 0
EXIT_WITNESS = 1
EXIT_USAGE = 2
EXIT_PRECISION = 3

CONSTRUCTIONS = ("five", "seven", "hyperbola", "fibonacci", "rational-beta",
                 "semiconvergent", "convergent")


class UsageError(ValueError):
    pass


def _window(text: str) -> Window:
    try:
        parts = [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r}") from None
    if len(parts) == 2:
        return Window(parts[0], parts[1])
    if len(parts) == 4:
        # u_max,v_max,u_min,v_min
        return Window(parts[0], parts[1], parts[2], parts[3])
    raise argparse.ArgumentTypeError("window is U,V or U,V,U0,V0")


def _emit(doc: dict, out: str | None) -> None:
    if out:
        Path(out).write_text(documents.dumps(doc))


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required here")


# -- subcommands


def cmd_bounds(args) -> int:
    alpha = parse_scalar(args.alpha)
    if args.beta is None:
        report = bounds.bound_report(alpha)
        doc = documents.bounds_document(report, format_scalar(alpha))
    else:
        beta = parse_scalar(args.beta)
        report = bounds.rect_bounds(alpha, beta, assert_irrational=args.assert_irrational)
        doc = documents.bounds_document(report, format_scalar(alpha), format_scalar(beta))
    print(f"regime {report.regime}")
    print(f"lower {doc['lower']}")
    print(f"upper {doc['upper']}")
    for key, value in report.quantities.items():
        print(f"{key} {value}")
    _emit(doc, args.out)
    return EXIT_OK


def cmd_search(args) -> int:
    text = args.lattice or args.lattice_pos
    if text is None:
        raise UsageError("a lattice is required (positional or --lattice)")
    spec = parse_lattice(text)
    cfg = SearchConfig(args.window, args.algo, args.jobs, time_budget=args.time_budget)
    result = max_empty_polygon(spec, cfg)
    print(f"cardinality {result.cardinality}")
    if result.best is not None:
        print("vertices " + " ".join(f"({p.u},{p.v})" for p in result.best.vertices))
    if not result.optimal:
        print("partial: time budget exhausted, cardinality is a lower bound only")
    _emit(documents.search_document(result), args.out)
    return EXIT_OK


def _build(args):
    name = args.name
    if name == "fibonacci":
        _need(args, "k")
        return constructions.fibonacci_polygon(args.k)
    _need(args, "alpha")
    alpha = parse_scalar(args.alpha)
    if name == "five":
        return constructions.five_point(alpha)
    if name == "seven":
        return constructions.seven_point(alpha)
    if name == "hyperbola":
        return constructions.hyperbola(alpha, args.k)
    if name == "rational-beta":
        return constructions.rational_beta_polygon(alpha, args.p, args.q)
    if name == "semiconvergent":
        _need(args, "beta", "m")
        return constructions.semiconvergent_polygon(
            alpha, parse_scalar(args.beta), args.m, assert_irrational=args.assert_irrational)
    _need(args, "ratio")
    return constructions.convergent_polygon(alpha, parse_scalar(args.ratio), args.count)


def cmd_construct(args) -> int:
    report = _build(args)
    doc = documents.construction_document(report)
    # without --out the document goes to stdout, so the summary moves to stderr
    log = sys.stdout if args.out else sys.stderr
    print(f"{report.name}: {len(report)} vertices, certified {report.certificate.verdict}", file=log)
    print("vertices " + " ".join(f"({p.u},{p.v})" for p in report.polygon.vertices), file=log)
    for key, value in report.parameters.items():
        print(f"{key} {value}", file=log)
    if args.out:
        _emit(doc, args.out)
    else:
        sys.stdout.write(documents.dumps(doc))
    return EXIT_OK


def cmd_cf(args) -> int:
    target = parse_scalar(args.target)
    cf = cf_expand(target, args.terms)
    print(f"{cf} {cf.termination}")
    print("convergents " + " ".join(str(c) for c in convergents(cf)))
    if args.best:
        if args.qmax is None:
            raise UsageError("--best needs --qmax")
        fracs = best_one_sided(target, Side(args.best), args.qmax)
        print(f"best {args.best} " + " ".join(f"{f.numerator}/{f.denominator}" for f in fracs))
    return EXIT_OK


def _read_polygon(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    doc = documents.loads(text)
    return documents.load_polygon(doc)


def cmd_verify(args) -> int:
    try:
        polygon = _read_polygon(args.infile)
    except CertificationFailed as exc:
        print(f"not strictly convex: {exc}", file=sys.stderr)
        return EXIT_WITNESS
    cert = is_empty_polygon(polygon)
    if cert.empty:
        print(f"empty: {len(polygon)} vertices, {cert.rows_swept} rows swept")
        return EXIT_OK
    print(f"witness ({cert.witness.u},{cert.witness.v})")
    return EXIT_WITNESS


def cmd_render(args) -> int:
    polygon = _read_polygon(args.infile)
    Path(args.svg).write_text(render_svg(polygon, log_scale=not args.linear))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helly-lattice",
        description="Empty convex polygons in exponential lattices, certified exactly.")
    parser.add_argument("--max-bits", type=int, default=None,
                        help="precision ceiling for certified reals (default 4096 or $HELLY_MAX_PRECISION_BITS)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="closed-form bounds for L(alpha) or L(alpha, beta)")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta")
    p.add_argument("--assert-irrational", action="store_true",
                   help="treat log_alpha(beta) as irrational when no relation is found")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", help="largest empty polygon in a window")
    p.add_argument("lattice_pos", nargs="?", metavar="LATTICE")
    p.add_argument("--lattice")
    p.add_argument("--window", type=_window, required=True, help="U,V or U,V,U0,V0")
    p.add_argument("--algo", choices=["naive", "dp"], default="dp")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--time-budget", type=float, default=None, help="seconds")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("construct", help="build and certify a named polygon family")
    p.add_argument("name", choices=CONSTRUCTIONS)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--ratio", help="quadratic surd r with beta = alpha^r (convergent)")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--assert-irrational", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("cf", help="continued fraction and best approximations")
    p.add_argument("--target", required=True)
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--best", choices=["lower", "upper"])
    p.add_argument("--qmax", type=int)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("verify", help="re-certify a polygon document")
    p.add_argument("--in", dest="infile", required=True, help="document path, or - for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw a polygon document as SVG")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--svg", required=True)
    scale = p.add_mutually_exclusive_group()
    scale.add_argument("--log-scale", action="store_true", default=True,
                       help="log-log axes (default)")
    scale.add_argument("--linear", action="store_true")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with precision(max_bits=args.max_bits):
            return args.func(args)
    except (PrecisionExhausted, bounds.RelationUndecided, constructions.CFTooShort) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (CertificationFailed, constructions.SearchExhausted) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_WITNESS
    except (UsageError, ValueError, OSError, WindowTooLargeForNaive, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
