"""Development-time golden dataset generator (not part of the package).

Samples the benchmark parameter ranges per (case, region), computes the
CDF with the arbitrary-precision Phi-form integral, cross-checks every
row with a doubled truncation run (and a subset against the independent
density-integral form), escalates precision where the runs disagree,
and writes tests/data/reference_<case>_<region>.csv.

Usage: python tools/gen_reference.py [--count 2000] [--jobs 2]
"""

import argparse
import csv
import math
import multiprocessing as mp_proc
import os
import random
import sys

import mpmath as mp

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
SEEDS = {
    ("beta0", "small"): 101, ("beta0", "large"): 102,
    ("xmu", "small"): 201, ("xmu", "large"): 202,
    ("general", "small"): 301, ("general", "large"): 302,
}


def saddle(x, a, b, mu, d):
    g = mp.sqrt((a - b) * (a + b))
    xm = x - mu
    om = mp.sqrt(xm * xm + d * d)
    t1 = (-mp.mpf(3) / 2 + mp.sqrt(mp.mpf(9) / 4 + (g * d) ** 2)) / g ** 2
    t2 = (-mp.mpf(3) / 2 + mp.sqrt(mp.mpf(9) / 4 + (a * om) ** 2)) / a ** 2

    def gln(t):
        u = (xm - b * t) / mp.sqrt(t)
        return mp.log(mp.ncdf(u)) - d * d / (2 * t) - g * g * t / 2 - mp.mpf(3) / 2 * mp.log(t)

    return t1 if gln(t1) >= gln(t2) else t2


def cdf_phi(x, a, b, mu, d, dps, n_mult=1, maxdegree=12):
    with mp.workdps(dps + 20):
        x, a, b, mu, d = map(mp.mpf, (x, a, b, mu, d))
        g = mp.sqrt((a - b) * (a + b))
        xm = x - mu
        lnC = mp.log(d) + d * g - mp.log(2 * mp.pi) / 2

        def gln(t):
            u = (xm - b * t) / mp.sqrt(t)
            return (mp.log(mp.ncdf(u)) - d * d / (2 * t) - g * g * t / 2
                    - mp.mpf(3) / 2 * mp.log(t))

        t0 = saddle(x, a, b, mu, d)
        g0 = gln(t0)
        target = mp.log(mp.mpf(10)) * (-(dps + 12))
        hi = t0
        while gln(hi) - g0 > target - mp.log(1 + hi):
            hi *= 2
        hi *= n_mult
        f = lambda t: mp.e ** (gln(t) - g0)
        pts = sorted(set(p for p in (mp.mpf(0), t0 / 8, t0, min(8 * t0, hi), hi)
                         if 0 <= p <= hi))
        res, err = mp.quad(f, pts, maxdegree=maxdegree, error=True)
        if res <= 0:
            return mp.mpf(0), mp.mpf(1)
        rel_err = err / res
        return mp.e ** (lnC + g0 + mp.log(res)), rel_err


def one_row(task):
    case, region, x, a, b, mu, d = task
    dps = 50
    tag = region
    v1, e1 = cdf_phi(x, a, b, mu, d, dps)
    v2, _ = cdf_phi(x, a, b, mu, d, dps, n_mult=2)
    agree = abs(v1 - v2) <= mp.mpf(10) ** -25 * max(abs(v1), mp.mpf(10) ** -300)
    noisy = e1 > mp.mpf(10) ** -(dps - 10)
    if not agree or noisy:
        dps = 300
        tag = region + "-hard"
        v1, e1 = cdf_phi(x, a, b, mu, d, dps, maxdegree=14)
        v2, _ = cdf_phi(x, a, b, mu, d, dps, n_mult=2, maxdegree=14)
        agree = abs(v1 - v2) <= mp.mpf(10) ** -25 * max(abs(v1), mp.mpf(10) ** -300)
        if not agree:
            tag = "quarantine"
    with mp.workdps(40):
        sval = mp.nstr(v1, 32, strip_zeros=False)
    return (repr(x), repr(a), repr(b), repr(mu), repr(d), sval, tag)


def sample(case, region, count):
    rng = random.Random(SEEDS[(case, region)])
    r = RANGES[(case, region)]
    out = []
    while len(out) < count:
        a = rng.uniform(*r["alpha"])
        b = rng.uniform(*r["beta"]) if case != "beta0" else 0.0
        if abs(b) >= a:
            continue
        if math.sqrt(max((a - b) * (a + b), 0.0)) < 1e-12:
            continue
        d = rng.uniform(*r["delta"])
        if case == "xmu":
            mu = 0.0
            x = 0.0
        else:
            mu = rng.uniform(*r["mu"])
            x = rng.uniform(*r["x"])
        out.append((case, region, x, a, b, mu, d))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--jobs", type=int, default=os.cpu_count())
    ap.add_argument("--outdir", default="tests/data")
    ap.add_argument("--cases", default="beta0,xmu,general")
    ap.add_argument("--regions", default="small,large")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    for case in args.cases.split(","):
        for region in args.regions.split(","):
            tasks = sample(case, region, args.count)
            path = os.path.join(args.outdir, f"reference_{case}_{region}.csv")
            with mp_proc.Pool(args.jobs) as pool, open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                fh.write(f"# golden NIG CDF reference, case={case} region={region} "
                         f"count={args.count} seed={SEEDS[(case, region)]}\n")
                w.writerow(["x", "alpha", "beta", "mu", "delta", "cdf_ref", "region_tag"])
                done = 0
                for row in pool.imap(one_row, tasks, chunksize=8):
                    w.writerow(row)
                    done += 1
                    if done % 100 == 0:
                        print(f"{case}/{region}: {done}/{len(tasks)}", flush=True)
            print(f"wrote {path}", flush=True)


if __name__ == "__main__":
    main()
