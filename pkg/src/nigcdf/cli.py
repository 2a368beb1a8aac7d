"""Command-line front door: eval, batch, verify, bench.

Exit codes: 0 success, 1 usage error, 2 parameter error, 3 degraded
accuracy.  CSV formats are plain comma-separated text with a header
line; lines starting with '#' are comments.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import random
import statistics
import sys
import time

from . import __version__
from .dispatcher import DEFAULT_EPS, cdf, pdf, sf
from .quadrature import cdf_by_quadrature
from .result import DomainViolation, Evaluation, NigParams, NonConvergence, ParameterError
from .series_beta0 import (
    B0Context,
    asymptotic_b0_large_xm,
    series_b0_accelerated,
    series_b0_alternating,
    series_b0_positive,
    uniform_b0_large_alpha,
)
from .series_general import (
    GeneralContext,
    general_asymptotic_large_delta,
    general_asymptotic_large_xm,
    general_series_bessel_ak,
    general_series_hermite_beta,
    general_series_hermite_xmu,
    uniform_general_large_gamma,
)
from .series_xmu import XmuContext, xmu_asymptotic_large_delta, xmu_series_exp, xmu_series_phi

# benchmark sampling ranges per (case, region)
RANGES = {
    ("beta0", "small"): dict(x=(-5, 5), alpha=(0.001, 5), mu=(-5, 5), delta=(0.001, 5)),
    ("beta0", "large"): dict(x=(-10, 10), alpha=(0.001, 50), mu=(-10, 10), delta=(0.001, 50)),
    ("xmu", "small"): dict(alpha=(0.001, 5), beta=(-5, 5), delta=(0.001, 5)),
    ("xmu", "large"): dict(alpha=(0.001, 50), beta=(-50, 50), delta=(0.001, 50)),
    ("general", "small"): dict(x=(-5, 5), alpha=(0.001, 5), beta=(-5, 5), mu=(-5, 5),
                               delta=(0.001, 5)),
    ("general", "large"): dict(x=(-10, 10), alpha=(0.001, 50), beta=(-50, 50),
                               mu=(-10, 10), delta=(0.001, 50)),
}


def draw_params(case: str, region: str, rng: random.Random):
    """One (x, NigParams) draw from the benchmark ranges (rejection on |beta| < alpha)."""
    r = RANGES[(case, region)]
    while True:
        alpha = rng.uniform(*r["alpha"])
        beta = rng.uniform(*r["beta"]) if case != "beta0" else 0.0
        if abs(beta) >= alpha:
            continue
        try:
            if case == "xmu":
                params = NigParams(alpha, beta, 0.0, rng.uniform(*r["delta"]))
                return params.mu, params
            mu = rng.uniform(*r["mu"])
            params = NigParams(alpha, beta, mu, rng.uniform(*r["delta"]))
            return rng.uniform(*r["x"]), params
        except ParameterError:
            continue


_FORCED = {
    "series-b0-positive": lambda p, x, e: series_b0_positive(_b0(p, x), e),
    "series-b0-alternating": lambda p, x, e: series_b0_alternating(_b0(p, x), e),
    "series-b0-accelerated": lambda p, x, e: series_b0_accelerated(_b0(p, x), e),
    "asymptotic-b0-large-xm": lambda p, x, e: asymptotic_b0_large_xm(_b0(p, x), e),
    "uniform-b0-large-alpha": lambda p, x, e: uniform_b0_large_alpha(_b0(p, x)),
    "series-xmu-phi": lambda p, x, e: xmu_series_phi(XmuContext.of(p), e),
    "series-xmu-exp": lambda p, x, e: xmu_series_exp(XmuContext.of(p), e),
    "asymptotic-xmu-large-delta": lambda p, x, e: xmu_asymptotic_large_delta(XmuContext.of(p), e),
    "series-general-bessel-ak": lambda p, x, e: general_series_bessel_ak(
        GeneralContext.make(p, x), e),
    "series-general-hermite-xmu": lambda p, x, e: general_series_hermite_xmu(
        GeneralContext.make(p, x), e),
    "series-general-hermite-beta": lambda p, x, e: general_series_hermite_beta(
        GeneralContext.make(p, x), e),
    "asymptotic-general-large-delta": lambda p, x, e: general_asymptotic_large_delta(
        GeneralContext.make(p, x), e),
    "asymptotic-general-large-xm": lambda p, x, e: general_asymptotic_large_xm(
        GeneralContext.make(p, x), e),
    "uniform-general-large-gamma": lambda p, x, e: uniform_general_large_gamma(
        GeneralContext.make(p, x)),
    "quadrature": lambda p, x, e: cdf_by_quadrature(p, x, e),
}


def _b0(p: NigParams, x: float) -> B0Context:
    if p.beta != 0.0:
        raise DomainViolation("beta must be 0 for this method")
    return B0Context.make(p.alpha, p.delta, x, p.mu)


def _evaluate(params: NigParams, x: float, eps: float, method: str) -> Evaluation:
    if method == "auto":
        return cdf(params, x, eps)
    try:
        fn = _FORCED[method]
    except KeyError:
        raise ParameterError(f"unknown method {method!r}")
    return fn(params, x, eps)


def cmd_eval(args) -> int:
    try:
        params = NigParams(args.alpha, args.beta, args.mu, args.delta)
        ev = _evaluate(params, args.x, args.eps, args.method)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except (NonConvergence, DomainViolation) as exc:
        print(f"method failed: {exc}", file=sys.stderr)
        return 2
    print(f"value {ev.value:.17g}")
    print(f"method {ev.method}")
    print(f"terms {ev.terms}")
    print(f"err_estimate {ev.err_estimate:.3g}")
    if args.verbose:
        print(f"degraded {ev.degraded}")
        print(f"sf {sf(params, args.x, args.eps).value:.17g}")
        print(f"pdf {pdf(params, args.x):.17g}")
    return 3 if ev.degraded else 0


def _read_rows(path: str):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        return [], []
    header = [h.strip() for h in rows[0]]
    return header, rows[1:]


def cmd_batch(args) -> int:
    header, rows = _read_rows(args.input)
    need = ["x", "alpha", "beta", "mu", "delta"]
    out_header = (header or need) + ["cdf", "method", "err_estimate"]
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(out_header)
        if not header:
            return 0
        idx = {}
        for col in need:
            if col not in header:
                print(f"missing column {col!r}", file=sys.stderr)
                return 1
            idx[col] = header.index(col)
        for row in rows:
            try:
                vals = {c: float(row[idx[c]]) for c in need}
                params = NigParams(vals["alpha"], vals["beta"], vals["mu"], vals["delta"])
                ev = cdf(params, vals["x"], args.eps)
                w.writerow(row + [f"{ev.value:.17g}", ev.method, f"{ev.err_estimate:.3g}"])
            except (ValueError, IndexError, ParameterError) as exc:
                w.writerow(row + ["ERROR", f"{type(exc).__name__}", ""])
    return 0


def _percentiles(errs):
    if not errs:
        return [0.0, 0.0, 0.0]
    qs = statistics.quantiles(errs, n=4, method="inclusive") if len(errs) > 1 else [errs[0]] * 3
    return qs


def cmd_verify(args) -> int:
    header, rows = _read_rows(args.reference)
    need = ["x", "alpha", "beta", "mu", "delta", "cdf_ref"]
    for col in need:
        if col not in header:
            print(f"reference file missing column {col!r}", file=sys.stderr)
            return 1
    idx = {c: header.index(c) for c in need}
    tag_i = header.index("region_tag") if "region_tag" in header else None
    per_method: dict = {}
    per_region: dict = {}
    errs = []
    total = success = skipped = 0
    for row in rows:
        try:
            vals = [float(row[idx[c]]) for c in need]
            params = NigParams(vals[1], vals[2], vals[3], vals[4])
        except (ValueError, IndexError, ParameterError) as exc:
            print(f"skipping malformed row {row!r}: {exc}", file=sys.stderr)
            skipped += 1
            continue
        x, ref = vals[0], vals[5]
        ev = cdf(params, x, args.eps)
        rel = abs(ev.value - ref) / abs(ref) if ref != 0.0 else abs(ev.value)
        ok = rel <= args.tolerance
        total += 1
        success += ok
        errs.append(rel)
        tag = row[tag_i].strip() if tag_i is not None and len(row) > tag_i else "all"
        for book, key in ((per_method, ev.method), (per_region, tag or "all")):
            slot = book.setdefault(key, {"count": 0, "success": 0, "errs": []})
            slot["count"] += 1
            slot["success"] += ok
            slot["errs"].append(rel)

    summary = {
        "total": total,
        "success": success,
        "success_rate": success / total if total else 0.0,
        "skipped": skipped,
        "tolerance": args.tolerance,
        "median_rel_err": statistics.median(errs) if errs else 0.0,
        "mean_rel_err": statistics.fmean(errs) if errs else 0.0,
        "per_method": [], "per_region": [],
    }
    print(f"verified {total} rows against {args.reference}")
    print(f"success {success}/{total}"
          f" ({100.0 * summary['success_rate']:.2f}%) at tolerance {args.tolerance:g}")
    print(f"median rel err {summary['median_rel_err']:.3g}"
          f"   mean rel err {summary['mean_rel_err']:.3g}")
    for name, book, dest in (("method", per_method, "per_method"),
                             ("region", per_region, "per_region")):
        print(f"-- by {name} --")
        for key in sorted(book):
            slot = book[key]
            q1, q2, q3 = _percentiles(slot["errs"])
            mx = max(slot["errs"])
            print(f"{key:>32} {slot['count']:>6}  success {slot['success']:>6}"
                  f"  p25 {q1:.2e}  median {q2:.2e}  p75 {q3:.2e}  max {mx:.2e}")
            summary[dest].append({"name": key, "count": slot["count"],
                                  "success": slot["success"], "p25": q1, "p50": q2,
                                  "p75": q3, "max": mx})
    out = args.summary_out or (args.reference + ".summary.json")
    with open(out, "w") as fh:
        json.dump(summary, fh, indent=1)
    print(f"summary written to {out}")
    return 0


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    points = [draw_params(args.case, args.region, rng) for _ in range(args.n)]
    counts: dict = {}
    t0 = time.perf_counter()
    for x, params in points:
        ev = cdf(params, x, args.eps)
        counts[ev.method] = counts.get(ev.method, 0) + 1
    t_auto = time.perf_counter() - t0
    t0 = time.perf_counter()
    for x, params in points:
        cdf_by_quadrature(params, x, args.eps)
    t_quad = time.perf_counter() - t0
    print(f"case {args.case}, region {args.region}, n {args.n}, seed {args.seed}")
    print(f"auto       {t_auto:.3f} s total  {1e6 * t_auto / args.n:.1f} us/call")
    print(f"quadrature {t_quad:.3f} s total  {1e6 * t_quad / args.n:.1f} us/call")
    print(f"speedup    {t_quad / t_auto:.2f}x")
    for m in sorted(counts):
        print(f"  {m:>32} {counts[m]:>7} ({100.0 * counts[m] / args.n:.2f}%)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nigcdf",
                                 description="normal inverse Gaussian CDF evaluator")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate the CDF at one point")
    pe.add_argument("--x", type=float, required=True)
    pe.add_argument("--alpha", type=float, required=True)
    pe.add_argument("--beta", type=float, required=True)
    pe.add_argument("--mu", type=float, required=True)
    pe.add_argument("--delta", type=float, required=True)
    pe.add_argument("--eps", type=float, default=DEFAULT_EPS)
    pe.add_argument("--method", default="auto",
                    choices=["auto"] + sorted(_FORCED))
    pe.add_argument("--verbose", action="store_true")
    pe.set_defaults(func=cmd_eval)

    pb = sub.add_parser("batch", help="evaluate a CSV of points")
    pb.add_argument("--input", required=True)
    pb.add_argument("--output", required=True)
    pb.add_argument("--eps", type=float, default=DEFAULT_EPS)
    pb.set_defaults(func=cmd_batch)

    pv = sub.add_parser("verify", help="compare against a reference dataset")
    pv.add_argument("--reference", required=True)
    pv.add_argument("--tolerance", type=float, default=5e-13)
    pv.add_argument("--eps", type=float, default=DEFAULT_EPS)
    pv.add_argument("--summary-out", default=None)
    pv.set_defaults(func=cmd_verify)

    pn = sub.add_parser("bench", help="time auto dispatch vs forced quadrature")
    pn.add_argument("--region", choices=["small", "large"], default="small")
    pn.add_argument("--case", choices=["beta0", "xmu", "general"], default="beta0")
    pn.add_argument("--n", type=int, default=1000)
    pn.add_argument("--seed", type=int, default=0)
    pn.add_argument("--eps", type=float, default=DEFAULT_EPS)
    pn.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
