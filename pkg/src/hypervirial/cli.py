"""Command-line interface: ``hypervirial {compute,verify,asymptotics,bench,solve}``.

Exit codes: 0 success, 1 verification or fit failure, 2 usage error,
3 internal consistency error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import mpmath

from .analysis import SolverSettings, fit_gamma_growth, optimal_truncation, radial_eigenstate
from .bench import BENCH_ORACLE_LIMIT, run_bench
from .engine import energy_series, sign_violations
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    FitUnreliableError,
    HypervirialError,
    InternalConsistencyError,
    OracleFailure,
)
from .families import QuantumState, family_from_name
from .io import SeriesCache, SeriesDocument, format_rational
from .rspt import ORACLE_LIMIT, rspt_series

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _family(args):
    try:
        return family_from_name(args.family, args.p)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _state(args):
    try:
        return QuantumState(args.n, args.l)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _series(args, family, state, order):
    if getattr(args, "cache", None):
        return SeriesCache(args.cache).series(family, state, order)
    return energy_series(family, state, order)


def _write(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {output}: {exc}") from exc


def cmd_compute(args) -> int:
    family, state = _family(args), _state(args)
    if args.order < 0:
        raise UsageError("--order must be >= 0")
    series = _series(args, family, state, args.order)
    document = SeriesDocument.from_series(series, timestamp=time.time())
    if args.table2_scaling:
        document.coefficients = series.scaled(4)
        document.metadata["scaling"] = "4^k"
    text = document.to_json() if args.format == "json" else document.to_csv()
    _write(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    family = _family(args)
    if args.order < 0 or args.lmax < 0:
        raise UsageError("--order and --lmax must be >= 0")
    if args.order > args.oracle_limit:
        raise UsageError(f"--order {args.order} exceeds the oracle limit {args.oracle_limit}")
    mismatches = 0
    for l in range(args.lmax + 1):
        state = QuantumState(0, l)
        hfhv = energy_series(family, state, args.order)
        rspt = rspt_series(family, l, args.order, oracle_limit=args.oracle_limit)
        for k, (a, b) in enumerate(zip(hfhv, rspt)):
            ok = a == b
            mismatches += not ok
            print(f"l={l} k={k} {'match' if ok else 'MISMATCH'} {format_rational(a)}"
                  + ("" if ok else f" != {format_rational(b)}"))
    total = (args.lmax + 1) * (args.order + 1)
    print(f"{total - mismatches}/{total} coefficients match")
    return EXIT_OK if mismatches == 0 else EXIT_FAIL


def cmd_asymptotics(args) -> int:
    family, state = _family(args), _state(args)
    order = args.order
    window = tuple(args.window) if args.window else (int(0.8 * order), order - 2)
    if window[0] < 1 or window[0] > window[1]:
        raise UsageError(f"invalid window {window}")
    if window[1] + 1 > order:
        raise UsageError(f"window end {window[1]} needs --order >= {window[1] + 1}")
    series = _series(args, family, state, order)
    violations = sign_violations(series)
    print(f"{family.name} {state.label} order {order}, window {window}")
    print(f"sign pattern (-1)^(k+1): {'holds' if not violations else f'violated at k={violations[:10]}'}")
    try:
        fit = fit_gamma_growth(series, window, richardson_order=args.richardson_order)
    except FitUnreliableError as exc:
        print(f"fit unreliable: {exc}")
        if exc.diagnostics is not None:
            print(f"ratio tail: {exc.diagnostics.ratios[-5:]}")
        return EXIT_FAIL
    diag = fit.diagnostics
    print(f"a = {fit.a:.10g}")
    print(f"b = {fit.b:.10g}")
    print(f"unextrapolated r_k - r_(k-1) tail: {[round(v, 8) for v in diag.differences[-5:]]}")
    print(f"unextrapolated r_k/a - k tail:    {[round(v, 8) for v in diag.b_raw[-5:]]}")
    print(f"extrapolated a trace tail:        {[round(v, 10) for v in diag.a_trace[-5:]]}")
    print(f"extrapolated b trace tail:        {[round(v, 10) for v in diag.b_trace[-5:]]}")
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_bench(args) -> int:
    family = _family(args)
    try:
        orders = [int(t) for t in args.orders.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"malformed --orders {args.orders!r}") from exc
    if not orders:
        raise UsageError("--orders must list at least one order")
    try:
        report = run_bench(family, orders, repeats=args.repeats, oracle_limit=args.oracle_limit)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    _write(report.to_markdown() if args.format == "markdown" else report.to_json(), args.output)
    return EXIT_OK


def cmd_solve(args) -> int:
    family, state = _family(args), _state(args)
    if not args.g >= 0:
        raise UsageError("--g must be non-negative")
    overrides = {}
    if args.x_max is not None:
        overrides["x_max"] = args.x_max
    if args.step is not None:
        overrides["step"] = args.step
    if args.tol is not None:
        overrides["tol"] = args.tol
    if args.energy_range is not None:
        overrides["energy_range"] = tuple(args.energy_range)
    eigen = radial_eigenstate(family, state, args.g, SolverSettings(**overrides))
    series = energy_series(family, state, args.order)
    trunc = optimal_truncation(series, args.g)
    diff = abs(trunc.value - mpmath.mpf(eigen.energy))
    print(f"direct eigenvalue      = {eigen.energy:.15g}  (nodes={eigen.nodes})")
    print(f"optimal truncation     = {mpmath.nstr(trunc.value, 20)}")
    print(f"K_star                 = {trunc.K_star}")
    print(f"error_bound            = {mpmath.nstr(trunc.error_bound, 6)}")
    print(f"|difference|           = {mpmath.nstr(diff, 6)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypervirial", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def family_args(p, state=True):
        p.add_argument("family", help="cornell, quartic, coulomb or oscillator")
        p.add_argument("--p", type=int, default=None, help="perturbation exponent parameter")
        if state:
            p.add_argument("--n", type=int, default=0)
            p.add_argument("--l", type=int, default=0)

    p = sub.add_parser("compute", help="exact coefficients eps(0..order)")
    family_args(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--cache", default=None, metavar="DIR", help="series cache directory")
    p.add_argument("--table2-scaling", action="store_true", help="emit 4^k eps(k)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="compare with the RSPT oracle for n = 0")
    family_args(p, state=False)
    p.add_argument("--lmax", type=int, default=0)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--oracle-limit", type=int, default=ORACLE_LIMIT)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("asymptotics", help="fit eps(k) ~ (-1)^(k+1) Gamma(k+b) a^k")
    family_args(p)
    p.add_argument("--order", type=int, default=1000)
    p.add_argument("--window", type=int, nargs=2, metavar=("K_LO", "K_HI"))
    p.add_argument("--richardson-order", type=int, default=2)
    p.add_argument("--cache", default=None, metavar="DIR")
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("bench", help="HFHV vs RSPT wall times for the 1S state")
    family_args(p, state=False)
    p.add_argument("--orders", required=True, help="comma separated, e.g. 10,20,30,40")
    p.add_argument("--format", choices=("markdown", "json"), default="markdown")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--oracle-limit", type=int, default=BENCH_ORACLE_LIMIT)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("solve", help="direct eigenvalue vs optimally truncated series")
    family_args(p)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--order", type=int, default=60)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--energy-range", type=float, nargs=2, default=None, metavar=("E_LO", "E_HI"))
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InternalConsistencyError, OracleFailure) as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (BracketError, ConvergenceError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except HypervirialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
