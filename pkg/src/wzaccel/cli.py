"""Command-line driver.

Exit codes: 0 success, 1 verification or identity failure, 2 inapplicable
input or undefined terms, 3 parse/format errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .accel import combine_to_closed_form, identity_formula2, series_formula3
from .errors import NotSimilar, NotSimilarPair, PairFormatError, WZAccelError
from .evaluate import (
    VANISHES,
    check_boundary_vanishing,
    convergence_grid,
    eval_series,
    format_grid,
    verify_identity_numeric,
)
from .hyperterm import format_term, term_to_json
from .wz import find_companion, verify_wz

MAX_DIGITS = 100_000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _digits(text):
    v = _positive_int(text)
    if v > MAX_DIGITS:
        raise argparse.ArgumentTypeError(f"--digits is capped at {MAX_DIGITS}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _pair(ref):
    return catalog.verified_pair(catalog.resolve(ref))


# -- subcommands ---------------------------------------------------------------

def cmd_catalog(args) -> int:
    for entry in catalog.list_entries():
        print(f"{entry.id}\t{entry.description}")
    return 0


def cmd_verify(args) -> int:
    entry = catalog.resolve(args.pair)
    if entry.G is None:
        print(f"{entry.id}: G absent, deriving the companion", file=sys.stderr)
        entry = entry.with_companion()
    try:
        check = verify_wz(entry.F, entry.G)
    except NotSimilarPair as exc:
        print(f"{entry.id}: FAILED, G is not similar to F ({exc})", file=sys.stderr)
        return 1
    if check.ok:
        print(f"{entry.id}: WZ pair verified")
        return 0
    print(f"{entry.id}: FAILED, nonzero residue", file=sys.stderr)
    print(f"residue: {check.residue}")
    return 1


def cmd_certify(args) -> int:
    entry = catalog.resolve(args.f)
    G = find_companion(entry.F)
    out = catalog.CatalogEntry(entry.id, entry.description, entry.F, G, entry.claimed_value)
    if args.out:
        catalog.save_pair(out, args.out)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(catalog.dumps_pair(out))
    return 0


def cmd_accelerate(args) -> int:
    spec = series_formula3(_pair(args.pair), args.s, args.t)
    if args.closed_form:
        try:
            T = combine_to_closed_form(spec)
        except NotSimilar as exc:
            print(f"summands are not similar: {exc}", file=sys.stderr)
            return 2
        if args.json:
            _emit(term_to_json(T))
        else:
            print(f"sum_{{m>=0}} {format_term(T)}")
        return 0
    if args.json:
        _emit(spec.to_json())
    else:
        for T in spec.summands:
            print(format_term(T))
    return 0


def cmd_eval(args) -> int:
    spec = series_formula3(_pair(args.pair), args.s, args.t)
    if args.method == "binary":
        spec = combine_to_closed_form(spec)
    report = eval_series(spec, args.digits, method=args.method)
    if args.json:
        _emit(report.to_json())
    else:
        print(report.to_text())
    return 0


def cmd_bench(args) -> int:
    rows = convergence_grid(_pair(args.pair), range(1, args.s_max + 1), range(1, args.t_max + 1), args.digits)
    if args.json:
        _emit([r.to_json() for r in rows])
    else:
        print(format_grid(rows))
    return 0


def cmd_check_boundary(args) -> int:
    report = check_boundary_vanishing(_pair(args.pair), args.s, args.t, args.nmax)
    if args.json:
        _emit(report.to_json())
    else:
        for n, mag in report.samples:
            print(f"{n:>6}  {mag}")
        print(f"monotone from: {report.monotone_from_index}")
        print(f"verdict: {report.verdict}")
    return 0 if report.verdict == VANISHES else 1


def cmd_identity2(args) -> int:
    spec = identity_formula2(_pair(args.pair))
    report = verify_identity_numeric(spec, args.digits, args.truncation)
    tolerance = 10 ** -(args.digits // 2)
    if args.json:
        _emit(report.to_json())
    else:
        print(f"lhs       {report.lhs}")
        print(f"rhs       {report.rhs}")
        print(f"residual  {report.residual}  (truncation {report.truncation}, {report.digits} digits)")
    return 0 if report.residual < tolerance else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wzaccel", description="WZ-pair series acceleration.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("catalog", help="shipped pairs")
    c.add_argument("action", choices=["list"])
    c.set_defaults(func=cmd_catalog)

    c = sub.add_parser("verify", help="check the WZ condition of a pair")
    c.add_argument("--pair", required=True, help="catalog id or pair file")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("certify", help="derive G from F and write a pair file")
    c.add_argument("--f", required=True, help="catalog id or pair file providing F")
    c.add_argument("--out", help="output path (default: stdout)")
    c.set_defaults(func=cmd_certify)

    def st(c):
        c.add_argument("--pair", required=True, help="catalog id or pair file")
        c.add_argument("--s", type=_positive_int, default=1)
        c.add_argument("--t", type=_positive_int, default=1)

    c = sub.add_parser("accelerate", help="print the accelerated series")
    st(c)
    c.add_argument("--closed-form", action="store_true")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_accelerate)

    c = sub.add_parser("eval", help="evaluate the accelerated series")
    st(c)
    c.add_argument("--digits", type=_digits, required=True)
    c.add_argument("--method", choices=["loop", "binary"], default="loop")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_eval)

    c = sub.add_parser("bench", help="convergence table over (s, t)")
    c.add_argument("--pair", required=True)
    c.add_argument("--s-max", type=_nonneg_int, required=True)
    c.add_argument("--t-max", type=_nonneg_int, required=True)
    c.add_argument("--digits", type=_digits, default=50)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_bench)

    c = sub.add_parser("check-boundary", help="numerically check the row-sum limit")
    st(c)
    c.add_argument("--nmax", type=_nonneg_int, default=30)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check_boundary)

    c = sub.add_parser("identity2", help="numeric check of the axis-sum identity")
    c.add_argument("--pair", required=True)
    c.add_argument("--digits", type=_digits, default=40)
    c.add_argument("--truncation", type=_nonneg_int, default=200)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_identity2)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PairFormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 3
    except WZAccelError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
