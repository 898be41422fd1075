"""Command-line front door.

Subcommands:

    solve    clear one case (built-in or case file) and emit reports
    sweep    run a scenario table and compare against the golden values
    export   write built-in cases as case files

Exit codes (stable public contract):

    0   success
    2   usage error (argparse)
    3   input error: unreadable file, syntax/validation failure,
        unknown built-in
    4   clearing infeasible (internal inconsistency for valid cases)
    5   numerical failure in the solver
    6   golden mismatch or property failure in a sweep

Every flag can be defaulted through an environment variable with the
SHIFTMARKET_ prefix (SHIFTMARKET_OUT, SHIFTMARKET_FORMAT, SHIFTMARKET_TOL,
SHIFTMARKET_PIVOT, SHIFTMARKET_SEED); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis, cases, goldens
from .casefile import CaseError, parse_case, serialize_case
from .clearing import ClearingError, clear, welfare_decomposition
from .lp import NumericalError, SolveOptions

EXIT_OK = 0
EXIT_INPUT = 3
EXIT_INFEASIBLE = 4
EXIT_NUMERICAL = 5
EXIT_MISMATCH = 6

_ENV_PREFIX = "SHIFTMARKET_"


def _env(name: str, fallback):
    return os.environ.get(_ENV_PREFIX + name.upper(), fallback)


def _env_number(name: str, fallback, convert):
    """Numeric env default; a malformed value falls back rather than crashing."""
    raw = os.environ.get(_ENV_PREFIX + name.upper())
    if raw is None:
        return fallback
    try:
        return convert(raw)
    except ValueError:
        return fallback


def _solve_options(args) -> SolveOptions:
    opts = SolveOptions(pivot=args.pivot)
    if args.tol is not None:
        opts.tol_feas = opts.tol_dual = args.tol
    return opts


def _load_case(args):
    if args.builtin:
        try:
            return cases.builtin_case(args.builtin, args.scenario, seed=args.seed)
        except (KeyError, ValueError) as exc:
            raise CaseError(str(exc))
    path = Path(args.case)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise CaseError(f"cannot read {path}: {exc}")
    return parse_case(data)


def _write(out_dir: Path, name: str, text: str, verbose: bool):
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / name
    target.write_text(text)
    if verbose:
        print(f"wrote {target}", file=sys.stderr)


def cmd_solve(args) -> int:
    try:
        case = _load_case(args)
    except CaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        sol = clear(case, _solve_options(args))
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ClearingError as exc:
        print(f"clearing failed: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    formats = [f.strip() for f in args.format.split(",") if f.strip()]
    out_dir = Path(args.out)
    stem = case.name
    for fmt in formats:
        if fmt == "table":
            sys.stdout.write(sol.to_table())
            dec = welfare_decomposition(sol)
            sys.stdout.write(
                f"profit sum {dec.regrouped:g}  merchandising surplus "
                f"{dec.residual:g}\n")
        elif fmt == "json":
            _write(out_dir, f"{stem}.solution.json",
                   json.dumps(sol.to_dict(), indent=2, sort_keys=True) + "\n",
                   args.verbose)
        elif fmt == "csv":
            _write(out_dir, f"{stem}.prices.csv",
                   analysis.prices_long_csv(sol), args.verbose)
            _write(out_dir, f"{stem}.stats.csv",
                   analysis.price_stats(sol).to_csv(), args.verbose)
        elif fmt == "svg":
            _write(out_dir, f"{stem}.prices.svg",
                   analysis.svg_price_heatmap(sol), args.verbose)
        else:
            print(f"error: unknown format {fmt!r}", file=sys.stderr)
            return EXIT_INPUT
    if args.verbose:
        report = analysis.congestion_report(sol)
        sys.stderr.write(report.to_text())
    return EXIT_OK


def _sweep_tables(args) -> int:
    template = (cases.template_3bus() if args.builtin == "3bus"
                else cases.template_1bus_5t())
    results = cases.sweep(template, _solve_options(args))
    table = cases.sweep_table(results)
    sys.stdout.write(table)
    out_dir = Path(args.out)
    _write(out_dir, f"{template.name}.sweep.csv",
           table.replace(" | ", ","), args.verbose)

    golden = goldens.load_golden(args.builtin)
    status = EXIT_OK
    for res, entry in zip(results, golden["scenarios"]):
        if res.solution is None:
            print(f"scenario {entry['scenario']}: clearing failed: {res.error}")
            status = EXIT_MISMATCH
            continue
        cmp = goldens.compare_to_golden(res.solution, entry,
                                        tol=golden["tolerance"])
        print(cmp)
        if not cmp.ok:
            status = EXIT_MISMATCH
    print("golden check:", "pass" if status == EXIT_OK else "FAIL")
    return status


def _sweep_ieee30(args) -> int:
    rows = {}
    for flex in (False, True):
        case = cases.case_ieee30(flex, seed=args.seed)
        try:
            sol = clear(case, _solve_options(args))
        except (ClearingError, NumericalError) as exc:
            print(f"error: ieee30 flex={flex}: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        stats = analysis.price_stats(sol)
        neg = len(analysis.congestion_report(sol).negative_prices)
        rows[flex] = (sol, stats, neg)
        label = "flex" if flex else "noflex"
        print(f"{label}: welfare={sol.welfare:.2f} "
              f"sigma={[round(v, 3) for v in stats.sigma]} "
              f"mad={[round(v, 3) for v in stats.mad]} negative={neg}")

    (sol0, st0, neg0), (sol1, st1, neg1) = rows[False], rows[True]
    checks = {
        "welfare strictly increases with links": sol1.welfare > sol0.welfare + 1e-9,
        "sigma strictly decreases every period": all(
            b < a - 1e-9 for a, b in zip(st0.sigma, st1.sigma)),
        "mad strictly decreases every period": all(
            b < a - 1e-9 for a, b in zip(st0.mad, st1.mad)),
        "negative-price count does not increase": neg1 <= neg0,
    }
    status = EXIT_OK
    for label, ok in checks.items():
        print(f"{'pass' if ok else 'FAIL'}: {label}")
        if not ok:
            status = EXIT_MISMATCH

    out_dir = Path(args.out)
    csv = ["flex,welfare," + ",".join(
        f"sigma_t{t},mad_t{t}" for t in sol0.case.periods()) + ",negative"]
    for flex, (sol, st, neg) in rows.items():
        cells = [str(int(flex)), f"{sol.welfare:.6f}"]
        for s, m in zip(st.sigma, st.mad):
            cells += [f"{s:.6f}", f"{m:.6f}"]
        cells.append(str(neg))
        csv.append(",".join(cells))
    _write(out_dir, "ieee30.sweep.csv", "\n".join(csv) + "\n", args.verbose)
    return status


def cmd_sweep(args) -> int:
    if args.builtin not in cases.BUILTIN_NAMES:
        print(f"error: unknown builtin {args.builtin!r}; "
              f"known: {', '.join(cases.BUILTIN_NAMES)}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.builtin == "ieee30":
            return _sweep_ieee30(args)
        return _sweep_tables(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def cmd_export(args) -> int:
    name = args.builtin
    if name not in cases.BUILTIN_NAMES:
        print(f"error: unknown builtin {name!r}; "
              f"known: {', '.join(cases.BUILTIN_NAMES)}", file=sys.stderr)
        return EXIT_INPUT
    out_dir = Path(args.out)
    try:
        if name == "ieee30":
            for flex in (False, True):
                case = cases.case_ieee30(flex, seed=args.seed)
                _write(out_dir, f"{case.name}.case", serialize_case(case),
                       args.verbose)
                print(f"{case.name}.case")
        else:
            scenarios = ([args.scenario] if args.scenario is not None
                         else range(1, 8))
            for s in scenarios:
                case = cases.builtin_case(name, s)
                _write(out_dir, f"{case.name}.case", serialize_case(case),
                       args.verbose)
                print(f"{case.name}.case")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: cannot write to {out_dir}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftmarket",
        description="Market clearing over space-time node graphs with "
                    "shiftable data-center load.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_scenario=True):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--builtin", help="built-in case name: "
                         + ", ".join(cases.BUILTIN_NAMES))
        if p.prog.endswith("solve"):
            src.add_argument("--case", help="path to a case file")
        if with_scenario:
            p.add_argument("--scenario", type=int,
                           default=None, help="scenario number (tables: 1..7; "
                           "ieee30: 0 = no flexibility, 1 = with links)")
        p.add_argument("--out", default=_env("out", "."),
                       help="output directory for report files")
        p.add_argument("--tol", type=float,
                       default=_env_number("tol", None, float),
                       help="feasibility/dual tolerance override")
        p.add_argument("--pivot", choices=("dantzig", "bland"),
                       default=_env("pivot", "dantzig"))
        p.add_argument("--seed", type=int, default=_env_number("seed", 0, int),
                       help="seed for the ieee30 synthetic profiles")
        p.add_argument("--verbose", action="store_true")

    p_solve = sub.add_parser("solve", help="clear one case")
    common(p_solve)
    p_solve.add_argument("--format", default=_env("format", "table"),
                         help="comma list of: table, json, csv, svg")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="run a scenario table")
    common(p_sweep, with_scenario=False)
    p_sweep.set_defaults(func=cmd_sweep)

    p_export = sub.add_parser("export", help="emit built-in case files")
    common(p_export)
    p_export.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve" and not (args.builtin or args.case):
        parser.error("solve needs --builtin or --case")
    if args.command in ("sweep", "export") and not args.builtin:
        parser.error(f"{args.command} needs --builtin")
    try:
        return args.func(args)
    except CaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
