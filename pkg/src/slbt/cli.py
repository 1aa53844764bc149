"""Command-line front end: ``slbt <subcommand> [options]``.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 ok, 1 usage error,
2 domain or size-guard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from slbt import __version__
from slbt.combinatorics import ModelA, joint_tx, minus_count_pmf
from slbt.errors import DomainError, GuardError
from slbt.exact import (
    MAX_ENUM_BOXES,
    gridsearch_prior,
    likelihood_matrix,
    lock_configs,
    oracle_for_row,
    signals,
)
from slbt.montecarlo import SimConfig, simulate
from slbt.planner import ExplosionModel, solve, threshold_d
from slbt.posterior import posterior_from_counts, posterior_from_expectations, ratio_via_c
from slbt.reference import discrepancies, find_reference

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def number(text: str) -> float:
    """Parse ``"0.75"`` or ``"9/12"``; fractions are reduced exactly before conversion."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid number {text!r} (use decimal or p/q)")


def number_list(text: str) -> list[float]:
    return [number(t) for t in text.split(",")]


@dataclass
class Report:
    title: str
    columns: list
    rows: list
    extras: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    flagged: set = field(default_factory=set)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--precision", type=int, default=3, help="decimals for text output")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--n", type=int, required=True, help="number of boxes")
    model.add_argument("--k", type=int, required=True, help="number of locks")
    model.add_argument("--a", type=number, required=True, help="sensitivity P(plus | lock)")
    model.add_argument("--b", type=number, required=True, help="specificity P(minus | no lock)")

    expl = argparse.ArgumentParser(add_help=False)
    expl.add_argument("--p", type=number, required=True, help="single-bomb explosion probability")

    parser = _Parser(prog="slbt", description="Symmetric locks-bombs-testing game solver")
    parser.add_argument("--version", action="version", version=f"slbt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("dist", parents=[common, model], help="distribution of the minus count")
    r = sub.add_parser("ratios", parents=[common, model], help="posterior and ratio table")
    r.add_argument("--p", type=number, help="also report d(x) for this explosion probability")

    s = sub.add_parser("solve", parents=[common, model, expl], help="game values v(x,m), v(m)")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int, help="single bomb count")
    g.add_argument("--m-max", type=int, help="solve for m = 1..m-max")

    t = sub.add_parser("tables", parents=[common, model], help="render one of the standard tables")
    t.add_argument("--which", choices=("likelihood", "joint", "ratios", "values"), required=True)
    t.add_argument("--p", type=number)
    t.add_argument("--m-max", type=int, default=5)

    o = sub.add_parser("oracle", parents=[common, model, expl], help="planner vs brute force")
    o.add_argument("--m", type=int, required=True)
    o.add_argument("--x", type=int, help="restrict to one minus count")

    sm = sub.add_parser("simulate", parents=[common, model, expl], help="Monte Carlo check")
    sm.add_argument("--m", type=int, required=True)
    sm.add_argument("--trials", type=int, default=200_000)
    sm.add_argument("--seed", type=int, help="64-bit seed (falls back to $LBT_SEED, then 0)")

    gs = sub.add_parser("gridsearch", parents=[common, model, expl], help="defender prior grid search")
    gs.add_argument("--resolution", type=number, default=1e-3)
    gs.add_argument("--costs", type=number_list, help="comma-separated box values")
    return parser


def _validate(args):
    def bad(flag, msg):
        raise UsageError(f"slbt {args.command}: error: argument --{flag}: {msg}")

    if args.n < 1:
        bad("n", f"must be positive, got {args.n}")
    if not 0 < args.k < args.n:
        bad("k", f"need 0 < k < n, got k={args.k}, n={args.n}")
    for flag in ("a", "b"):
        v = getattr(args, flag)
        if not 0.0 <= v <= 1.0:
            bad(flag, f"must lie in [0, 1], got {v}")
    p = getattr(args, "p", None)
    if p is not None and not 0.0 < p <= 1.0:
        bad("p", f"must lie in (0, 1], got {p}")
    for flag in ("m", "m_max"):
        v = getattr(args, flag, None)
        if v is not None and v < 0:
            bad(flag.replace("_", "-"), f"must be non-negative, got {v}")
    if args.precision < 0:
        bad("precision", "must be non-negative")
    if args.command == "simulate":
        if args.trials < 1:
            bad("trials", "must be at least 1")
        if args.seed is None:
            env = os.environ.get("LBT_SEED")
            try:
                args.seed = int(env) if env is not None else 0
            except ValueError:
                raise UsageError(f"slbt simulate: error: LBT_SEED is not an integer: {env!r}")
        if not 0 <= args.seed < 2**64:
            bad("seed", "must be an unsigned 64-bit integer")
    if args.command == "gridsearch" and args.costs is not None and len(args.costs) != args.n:
        bad("costs", f"need {args.n} values, got {len(args.costs)}")


def parse_args(argv=None) -> argparse.Namespace:
    args = _parser().parse_args(argv)
    _validate(args)
    return args


def _params(args) -> dict:
    skip = {"format", "precision"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def _fmt(v, prec: int) -> str:
    if v is None:
        return "-"
    if isinstance(v, (bool, np.bool_)):
        return "yes" if v else "no"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return "-"
        return f"{float(v):.{prec}f}"
    return str(v)


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return None if math.isnan(f) or math.isinf(f) else f
    if isinstance(v, (list, tuple)):
        return [_jsonable(u) for u in v]
    if isinstance(v, dict):
        return {k: _jsonable(u) for k, u in v.items()}
    if v is None:
        return None
    return str(v)


def render(report: Report, args) -> str:
    if args.format == "json":
        doc = {
            "params": _jsonable(_params(args)),
            "results": {
                "title": report.title,
                "columns": report.columns,
                "rows": _jsonable(report.rows),
                **_jsonable(report.extras),
            },
            "warnings": report.warnings,
            "version": __version__,
        }
        return json.dumps(doc, indent=2) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow(["" if v is None else repr(float(v)) if isinstance(v, (float, np.floating)) else _fmt(v, 0) for v in row])
        return buf.getvalue()
    prec = args.precision
    cells = [[_fmt(v, prec) + ("*" if (i, j) in report.flagged else "") for j, v in enumerate(row)]
             for i, row in enumerate(report.rows)]
    widths = [max([len(str(c))] + [len(r[j]) for r in cells]) for j, c in enumerate(report.columns)]
    lines = [report.title]
    lines.append("  ".join(str(c).rjust(wd) for c, wd in zip(report.columns, widths)))
    for r in cells:
        lines.append("  ".join(c.rjust(wd) for c, wd in zip(r, widths)))
    for name, v in report.extras.items():
        lines.append(f"{name} = {_fmt(v, prec)}")
    for msg in report.warnings:
        lines.append(f"* {msg}")
    return "\n".join(lines) + "\n"


def _model(args) -> ModelA:
    return ModelA(args.n, args.k, args.a, args.b)


def cmd_dist(args) -> Report:
    model = _model(args)
    g = minus_count_pmf(model).mass
    g1 = minus_count_pmf(model, boxes=model.n - 1).mass
    rows = [[x, g[x], g1[x] if x < g1.size else None] for x in range(model.n + 1)]
    return Report(f"minus-count distribution, n={model.n}, k={model.k}",
                  ["x", "g(n,k)", "g(n-1,k)"], rows)


def cmd_ratios(args) -> Report:
    model = _model(args)
    t2 = posterior_from_counts(model)
    t3 = posterior_from_expectations(model)
    interior = 0.0 < model.a < 1.0 and 0.0 < model.b < 1.0
    expl = ExplosionModel(args.p) if getattr(args, "p", None) is not None else None
    cols = ["x", "p_minus", "p_plus", "r", "r_expect", "r_c"] + (["d"] if expl else [])
    rows = []
    for x in range(1, model.n):
        if not t2.defined[x]:
            rows.append([x] + [None] * (len(cols) - 1))
            continue
        row2, row3 = t2.row(x), t3.row(x)
        r2 = "inf" if row2.infinite else row2.ratio
        r3 = "inf" if row3.infinite else row3.ratio
        rc = ratio_via_c(model, x) if interior else None
        line = [x, row2.p_minus, row2.p_plus, r2, r3, rc]
        if expl:
            line.append(threshold_d(row2.ratio, expl, cap=None) if not row2.infinite and row2.ratio > 1 else None)
        rows.append(line)
    return Report(f"posterior table, n={model.n}, k={model.k}", cols, rows,
                  extras={"c": model.c if math.isfinite(model.c) else "inf"})


def _values_report(model, expl, m_values, m_max) -> Report:
    tables = solve(model, expl, m_max)
    n = model.n
    cols = ["x"] + [f"m={m}" for m in m_values]
    if not m_values:
        return Report(f"game values v(x,m), n={n}, k={model.k}, p={expl.p}", cols, [])
    rows = [[x] + [tables.v_xm[x, m] for m in m_values] for x in range(n + 1)]
    rows.append(["v(m)"] + [tables.v_m[m] for m in m_values])
    report = Report(f"game values v(x,m), n={n}, k={model.k}, p={expl.p}", cols, rows)
    ref = find_reference(n, model.k, model.a, model.b, expl.p)
    if ref is not None:
        for x, m, printed, computed in discrepancies(ref, tables.v_xm, tables.v_m):
            if m not in m_values:
                continue
            i = n + 1 if x is None else x
            report.flagged.add((i, m_values.index(m) + 1))
            label = f"v({m})" if x is None else f"v({x},{m})"
            report.warnings.append(
                f"{label}: reference table lists {printed:g}, optimal value is {computed:.6f} "
                "(certified by exhaustive search)"
            )
        if report.warnings:
            report.warnings.append(ref.note)
    return report


def cmd_solve(args) -> Report:
    model, expl = _model(args), ExplosionModel(args.p)
    if args.m is not None:
        tables = solve(model, expl, args.m)
        m = args.m
        rows = []
        for x in range(model.n + 1):
            t = tables.alloc[x][m]
            d = int(tables.d[x]) if 0 < x < model.n and tables.d[x] > 0 else None
            rows.append([x, tables.g[x], d, str(t) if t is not None else None, tables.v_xm[x, m]])
        report = Report(f"solution for m={m}, n={model.n}, k={model.k}, p={expl.p}",
                        ["x", "P(N=x)", "d", "T(x,m)", "v(x,m)"], rows,
                        extras={f"v({m})": tables.v_m[m]})
        ref = find_reference(model.n, model.k, model.a, model.b, expl.p)
        if ref is not None:
            for x, mm, printed, computed in discrepancies(ref, tables.v_xm, tables.v_m):
                if mm != m:
                    continue
                if x is not None:
                    report.flagged.add((x, 4))
                label = f"v({m})" if x is None else f"v({x},{m})"
                report.warnings.append(
                    f"{label}: reference table lists {printed:g}, optimal value is {computed:.6f} "
                    "(certified by exhaustive search)"
                )
            if report.warnings:
                report.warnings.append(ref.note)
        return report
    m_values = list(range(1, args.m_max + 1))
    return _values_report(model, expl, m_values, args.m_max)


def cmd_tables(args) -> Report:
    model = _model(args)
    if args.which == "likelihood":
        if model.n > MAX_ENUM_BOXES:
            raise GuardError(f"likelihood table needs n <= {MAX_ENUM_BOXES} (2^n columns); "
                             "use --which joint for larger n")
        P = likelihood_matrix(model.n, model.k, model.a, model.b)
        sig = ["".join(map(str, s)) for s in signals(model.n)]
        rows = [["".join(map(str, g))] + list(P[i]) for i, g in enumerate(lock_configs(model.n, model.k))]
        return Report("signal probabilities p(s|gamma)", ["gamma"] + sig, rows)
    if args.which == "joint":
        jt = joint_tx(model)
        rows = [[t] + list(jt.mass[t]) for t in range(model.k + 1)]
        rows.append(["g"] + list(jt.column_sums()))
        return Report("joint distribution s(t,x) = P(N1=t, N=x)",
                      ["t\\x"] + [str(x) for x in range(model.n + 1)], rows)
    if args.which == "ratios":
        return cmd_ratios(args)
    if args.p is None:
        raise UsageError("slbt tables: error: argument --p: required for --which values")
    if args.m_max < 0:
        raise UsageError("slbt tables: error: argument --m-max: must be non-negative")
    m_values = list(range(1, args.m_max + 1))
    return _values_report(model, ExplosionModel(args.p), m_values, args.m_max)


def cmd_oracle(args) -> Report:
    model, expl = _model(args), ExplosionModel(args.p)
    tables = solve(model, expl, args.m)
    xs = [args.x] if args.x is not None else list(range(1, model.n))
    rows = []
    for x in xs:
        if not 0 < x < model.n:
            raise DomainError(f"--x must satisfy 0 < x < n, got {x}")
        if not tables.posterior.defined[x]:
            rows.append([x, None, None, None, None, None])
            continue
        row = tables.posterior.row(x)
        res = oracle_for_row(row.p_minus, row.p_plus, model.n, x, expl.p, args.m)
        t = tables.alloc[x][args.m]
        duap = tuple(t.minus_counts(x) + t.plus_counts(model.n - x))
        planner_v = tables.v_xm[x, args.m]
        rows.append([x, planner_v, res.value, abs(planner_v - res.value), str(t), duap in res.maximizers])
    return Report(f"planner vs exhaustive search, m={args.m}",
                  ["x", "planner", "oracle", "abs_diff", "T(x,m)", "duap_optimal"], rows)


def cmd_simulate(args) -> Report:
    model, expl = _model(args), ExplosionModel(args.p)
    res = simulate(SimConfig(model, expl, args.m, args.trials, args.seed))
    analytic = float(solve(model, expl, args.m).v_m[args.m])
    rows = [[x, int(res.trials_per_x[x]), res.per_x_means[x], res.per_x_std_errors[x]]
            for x in range(model.n + 1)]
    return Report(f"simulation, m={args.m}, trials={args.trials}, seed={args.seed}",
                  ["x", "trials", "mean", "std_error"], rows,
                  extras={"mean_destroyed": res.mean_destroyed, "std_error": res.std_error,
                          f"v({args.m})": analytic, "z": res.z_score(analytic)})


def cmd_gridsearch(args) -> Report:
    model = _model(args)
    res = gridsearch_prior(model, args.p, args.resolution, args.costs)
    configs = ["".join(map(str, g)) for g in lock_configs(model.n, model.k)]
    rows = [list(w) for w in res.minimizers]
    return Report("grid minimizers of single-bomb damage", [f"pi({c})" for c in configs], rows,
                  extras={"min_damage": res.value, "grid_points": len(res.grid)})


COMMANDS = {
    "dist": cmd_dist,
    "ratios": cmd_ratios,
    "solve": cmd_solve,
    "tables": cmd_tables,
    "oracle": cmd_oracle,
    "simulate": cmd_simulate,
    "gridsearch": cmd_gridsearch,
}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        report = COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, GuardError) as exc:
        print(f"slbt: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.format == "csv":
        for msg in report.warnings:
            print(f"warning: {msg}", file=sys.stderr)
    sys.stdout.write(render(report, args))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
