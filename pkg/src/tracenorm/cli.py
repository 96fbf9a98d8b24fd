"""Command-line front end.

Exit codes: 0 success, 1 check failure, 2 usage/parse error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from .counting import count_toric, count_toric_ext, count_trace_norm
from .errors import BudgetExceeded, TableLimitExceeded, TraceNormError
from .fields import build_field, build_tower, parse_field_spec
from .harness import (
    CHECKS,
    DEFAULT_BUDGET,
    SweepConfig,
    SweepReport,
    default_workers,
    parse_checks,
    prime_powers_upto,
    run_sweep,
    run_unit,
    write_report,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

VERIFY_CHECKS = {
    "lemma21": ("lemma21",),
    "bounds": ("katz", "improved", "toric", "frobenius", "special", "zero_trace", "interval"),
    "gauss": ("gauss",),
    "davenport-hasse": ("davenport_hasse",),
    "divisibility": ("divisibility",),
}


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max candidate evaluations per count")
    parser.add_argument("--workers", type=int, default=None, help="worker count (default: $TRACENORM_WORKERS or CPU count)")
    parser.add_argument("--seed", type=int, default=0, help="field-construction seed")
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("csv", "structured"), default="csv")
    parser.add_argument("--timings", action="store_true", help="include per-unit wall-clock in the report")


def _element(value: str, name: str) -> int:
    try:
        v = int(value)
    except ValueError:
        raise UsageError(f"--{name} must be an integer element encoding, got {value!r}")
    return v


def _field_arg(sp: argparse.ArgumentParser, required: bool = True) -> None:
    sp.add_argument("--field", required=required, help="field as 'p^k' (base may be a prime power, e.g. 4^1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracenorm", description="Exact trace/norm and toric point counts over finite fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    fp = sub.add_parser("field", help="field construction")
    fsub = fp.add_subparsers(dest="action", required=True)
    info = fsub.add_parser("info", help="print modulus, generator and size")
    _field_arg(info)
    info.add_argument("--list-elements", action="store_true", help="print the element encoding table")
    _common(info)

    cp = sub.add_parser("count", help="single exact counts")
    csub = cp.add_subparsers(dest="action", required=True)
    tn = csub.add_parser("trace-norm", help="N_m(a, b)")
    _field_arg(tn)
    tn.add_argument("--m", type=int, required=True)
    tn.add_argument("--a", required=True)
    tn.add_argument("--b", required=True)
    _common(tn)
    tor = csub.add_parser("toric", help="N(u) on the toric hypersurface")
    _field_arg(tor)
    tor.add_argument("--n", type=int, required=True)
    tor.add_argument("--u", required=True)
    tor.add_argument("--full", action="store_true", help="plain n-fold enumeration (slow cross-check)")
    _common(tor)
    ext = csub.add_parser("toric-ext", help="N(u) over GF(q^r)")
    _field_arg(ext)
    ext.add_argument("--n", type=int, required=True)
    ext.add_argument("--u", required=True)
    ext.add_argument("--r", type=int, required=True)
    _common(ext)

    vp = sub.add_parser("verify", help="run checks for one field and n")
    vsub = vp.add_subparsers(dest="action", required=True)
    for name in VERIFY_CHECKS:
        v = vsub.add_parser(name)
        _field_arg(v)
        v.add_argument("--n", type=int, default=None)
        v.add_argument("--m", type=int, default=None, help="extension degree (n + 1)")
        v.add_argument("--a", default=None)
        v.add_argument("--b", default=None)
        v.add_argument("--all", action="store_true", help="every (a, b) in (GF(q)*)^2 (the default)")
        v.add_argument("--check", default=None, help="comma-separated subset of checks")
        _common(v)

    sw = sub.add_parser("sweep", help="full verification sweep")
    sw.add_argument("--field", action="append", default=None, help="field spec; repeat or comma-separate")
    sw.add_argument("--max-q", type=int, default=None, help="every prime power up to this")
    sw.add_argument("--n", default="1-4", help="n range, e.g. '1-4' or '2,3'")
    sw.add_argument("--check", default=None, help=f"comma-separated checks (default all: {','.join(CHECKS)})")
    _common(sw)
    return parser


def _n_range(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)


def _resolve_n(args) -> int:
    if args.n is not None and args.m is not None and args.m != args.n + 1:
        raise UsageError("--m must equal --n + 1")
    if args.n is not None:
        return args.n
    if args.m is not None:
        return args.m - 1
    raise UsageError("one of --n or --m is required")


def _cmd_field(args) -> int:
    p, k = parse_field_spec(args.field)
    fd = build_field(p, k, args.seed)
    print(f"q={fd.q} p={fd.p} k={fd.k}")
    print(f"modulus: {fd.modulus_str()}")
    print(f"generator: {fd.generator} ({fd.element_str(fd.generator)})")
    if args.list_elements:
        print("encoding,polynomial,dlog")
        for x in fd.elements():
            print(f"{x},{fd.element_str(x)},{'' if x == 0 else fd.log(x)}")
    return EXIT_OK


def _check_element(fd, value: int, name: str) -> int:
    if not 0 <= value < fd.q:
        raise UsageError(f"--{name}={value} is not an element of GF({fd.q})")
    return value


def _cmd_count(args) -> int:
    p, k = parse_field_spec(args.field)
    workers = args.workers or default_workers()
    if args.action == "trace-norm":
        if args.m < 2:
            raise UsageError("--m must be >= 2")
        tower = build_tower(p, k, args.m, args.seed)
        a = _check_element(tower.sub, _element(args.a, "a"), "a")
        b = _check_element(tower.sub, _element(args.b, "b"), "b")
        print(count_trace_norm(tower, a, b, args.budget))
        return EXIT_OK
    fd = build_field(p, k, args.seed)
    u = _check_element(fd, _element(args.u, "u"), "u")
    if u == 0:
        raise UsageError("--u must be nonzero")
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.action == "toric":
        print(count_toric(fd, u, args.n, budget=args.budget, workers=workers, full=args.full))
    else:
        if args.r < 1:
            raise UsageError("--r must be >= 1")
        print(count_toric_ext(fd, u, args.n, args.r, budget=args.budget, workers=workers))
    return EXIT_OK


def _finish(report: SweepReport, args) -> int:
    text = write_report(report, args.out, args.format, args.timings)
    _emit(text, args.out)
    t = report.tallies
    print(f"checked={t.checked} passed={t.passed} failed={t.failed} tight={t.tight} errors={t.errors}", file=sys.stderr)
    for row in report.errors:
        print(f"error: q={row.q} n={row.n}: {row.message}", file=sys.stderr)
    return report.exit_code()


def _cmd_verify(args) -> int:
    n = _resolve_n(args)
    if n < 1:
        raise UsageError("n must be >= 1")
    checks = VERIFY_CHECKS[args.action]
    if args.check:
        checks = parse_checks(args.check)
    p, k = parse_field_spec(args.field)
    pairs = None
    if (args.a is None) != (args.b is None):
        raise UsageError("--a and --b go together")
    if args.a is not None and not args.all:
        a, b = _element(args.a, "a"), _element(args.b, "b")
        if not (0 < a < p**k and 0 < b < p**k):
            raise UsageError("--a and --b must be nonzero elements")
        pairs = [(a, b)]
    res = run_unit(args.field, n, checks, args.budget, args.seed, pairs)
    config = {"fields": [args.field], "n": [n], "checks": list(parse_checks(checks)), "budget": args.budget, "seed": args.seed}
    report = SweepReport(config, res.rows, res.fields, res.max_ratio, {f"{args.field}/n={n}": res.seconds})
    return _finish(report, args)


def _cmd_sweep(args) -> int:
    fields: list[str] = []
    for item in args.field or []:
        fields.extend(s for s in item.split(",") if s.strip())
    if args.max_q is not None:
        fields.extend(prime_powers_upto(args.max_q))
    if not fields:
        fields = list(SweepConfig().fields)
    config = SweepConfig(
        fields=fields,
        n_values=_n_range(args.n),
        checks=parse_checks(args.check) if args.check is not None else CHECKS,
        budget=args.budget,
        workers=args.workers or default_workers(),
        seed=args.seed,
    )
    return _finish(run_sweep(config), args)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "field":
            return _cmd_field(args)
        if args.command == "count":
            return _cmd_count(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_sweep(args)
    except (BudgetExceeded, TableLimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError, TraceNormError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
