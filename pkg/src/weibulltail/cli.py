"""Command-line front end.

Subcommands: ``estimate``, ``select-k``, ``quantile``, ``qqplot`` and
``simulate``. Records go to stdout (JSON by default, CSV on request);
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .distributions import parse_spec
from .estimators import Method, Sample, log_spacings, ls_fit, select_k, theta_check, theta_tilde
from .quantiles import (
    QuantileRequest,
    quantile_bias_reduced,
    quantile_weissman,
    return_period_probability,
)
from .simulation import (
    SimulationConfig,
    append_table2_row,
    format_float,
    run_study,
    table2_row,
    write_curves_csv,
    TABLE2_HEADER,
)


class DataError(Exception):
    """Raised for unreadable or invalid input data files."""


def read_data(path: str) -> np.ndarray:
    """Parse whitespace-separated positive decimals; ``#`` starts a comment."""
    values = []
    try:
        fh = open(path)
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror}") from None
    with fh:
        for lineno, line in enumerate(fh, 1):
            for tok in line.split("#", 1)[0].split():
                try:
                    v = float(tok)
                except ValueError:
                    raise DataError(f"{path}:{lineno}: cannot parse {tok!r} as a number") from None
                if not (math.isfinite(v) and v > 0):
                    raise DataError(f"{path}:{lineno}: value {tok!r} is not strictly positive")
                values.append(v)
    if len(values) < 3:
        raise DataError(f"{path}: need at least 3 values, found {len(values)}")
    return np.array(values)


def _emit_record(record: dict, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(record) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(record.keys())
    w.writerow([format_float(v) if isinstance(v, float) else v for v in record.values()])


def cmd_estimate(args) -> int:
    data = Sample(read_data(args.input))
    if args.method == Method.TILDE.value:
        fit = theta_tilde(data, args.k)
    else:
        zs = log_spacings(data, args.k)
        fit = theta_check(zs) if args.method == Method.CHECK.value else ls_fit(zs)
    _emit_record(fit.as_dict(), args.format)
    return 0


def cmd_select_k(args) -> int:
    data = Sample(read_data(args.input))
    sel = select_k(data, args.k_min, args.k_max)
    if args.curve:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["k", "amse_hat"])
        for k, a in zip(sel.ks, sel.amse):
            w.writerow([int(k), format_float(a)])
        return 0
    record = {"k_hat": sel.k_hat, "theta_check": sel.theta_at_k_hat, "n": data.n}
    _emit_record(record, args.format)
    return 0


def cmd_quantile(args) -> int:
    data = Sample(read_data(args.input))
    if args.p is not None:
        p = args.p
    else:
        p = return_period_probability(args.years, args.record_years, data.n)
    if args.k is not None:
        k = args.k
    else:
        k = select_k(data, args.k_min, args.k_max).k_hat
    zs = log_spacings(data, k)
    if args.bias_reduced:
        fit = ls_fit(zs)
        req = QuantileRequest.from_sample(data, fit, p)
        q = quantile_bias_reduced(req, rho_hat=args.rho)
    else:
        fit = theta_check(zs)
        req = QuantileRequest.from_sample(data, fit, p)
        q = quantile_weissman(req)
    record = {
        "estimator": "bias_reduced" if args.bias_reduced else "weissman",
        "p": p,
        "k": k,
        "n": data.n,
        "theta": fit.theta,
    }
    if fit.b is not None:
        record["b"] = fit.b
    record.update(anchor=req.anchor, quantile=q)
    _emit_record(record, args.format)
    return 0


def qq_points(data: Sample, k: int) -> tuple[np.ndarray, np.ndarray]:
    """``(loglog(n/i), log X_{n-i+1,n})`` for i = 1..k-1."""
    n = data.n
    if not 2 <= k <= n:
        raise ValueError(f"k must be in [2, {n}], got {k}")
    i = np.arange(1, k)
    return np.log(np.log(n / i)), data.log_desc(k - 1)


def cmd_qqplot(args) -> int:
    data = Sample(read_data(args.input))
    x, y = qq_points(data, args.k)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["x", "y"])
    for a, b in zip(x, y):
        w.writerow([format_float(a), format_float(b)])
    if args.fit:
        slope = float(np.polyfit(x, y, 1)[0]) if x.size >= 2 else math.nan
        sys.stdout.write(f"# slope={format_float(slope)}\n")
    return 0


def cmd_simulate(args) -> int:
    spec = parse_spec(args.dist)
    config = SimulationConfig(
        spec=spec,
        n=args.n,
        replications=args.N,
        k_curve_max=args.k_curve_max,
        k_min=args.k_min,
        k_sel_max=args.k_sel_max,
        master_seed=args.seed,
        workers=args.workers,
    )
    report = run_study(config)
    os.makedirs(args.out, exist_ok=True)
    write_curves_csv(os.path.join(args.out, f"curves_{spec.label}.csv"), report.curves)
    append_table2_row(os.path.join(args.out, "table2.csv"), spec.label, spec, report.adaptive)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE2_HEADER)
    w.writerow(table2_row(spec.label, spec, report.adaptive))
    sys.stdout.write(buf.getvalue())
    return 0


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _probability(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("p must lie in (0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weibulltail", description="Weibull tail-coefficient estimation")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--input", required=True, metavar="PATH", help="whitespace-separated positive values")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--k-min", type=int, default=2)
    grid.add_argument("--k-max", type=int, default=None, help="default min(350, n-1)")

    p = sub.add_parser("estimate", parents=[data, common], help="estimate theta at a fixed k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.CHECK.value)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("select-k", parents=[data, common, grid], help="adaptive choice of k")
    p.add_argument("--curve", action="store_true", help="emit the full AMSE curve as CSV")
    p.set_defaults(func=cmd_select_k)

    p = sub.add_parser("quantile", parents=[data, common, grid], help="extreme quantile / return level")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--p", type=_probability, help="exceedance probability")
    target.add_argument("--years", type=float, help="return period in years (needs --record-years)")
    p.add_argument("--record-years", type=float, help="length of the record in years")
    p.add_argument("--k", type=int, default=None, help="default: adaptively selected")
    p.add_argument("--bias-reduced", action="store_true")
    p.add_argument("--rho", type=float, default=-1.0, help="second-order index for --bias-reduced")
    p.set_defaults(func=cmd_quantile)

    p = sub.add_parser("qqplot", parents=[data], help="quantile-quantile plot points")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--fit", action="store_true", help="append the OLS slope as a comment line")
    p.set_defaults(func=cmd_qqplot)

    p = sub.add_parser("simulate", help="Monte Carlo study for one distribution")
    p.add_argument("--dist", required=True, help="e.g. gamma:0.25,1  absnormal:0,1  weibull:4,4  halld:1,0.5")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", default=".", metavar="DIR")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--N", type=int, default=100, help="number of replications")
    p.add_argument("--k-curve-max", type=int, default=360)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-sel-max", type=int, default=350)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "quantile" and args.years is not None and args.record_years is None:
        parser.error("--years requires --record-years")
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
