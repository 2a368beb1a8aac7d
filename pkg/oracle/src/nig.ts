/**
 * The reference CDF: arbitrary-precision tanh-sinh integration of the
 * Laplace-type integral with saddle-normalized integrand, doubled-N
 * cross-checking and precision escalation.
 */

import Decimal from "decimal.js";
import { MpCtx, withPrecision } from "./mp";

export interface NigPoint {
  x: number;
  alpha: number;
  beta: number;
  mu: number;
  delta: number;
}

export interface OracleResult {
  /** decimal string with >= 30 significant digits */
  value: string;
  /** relative double-truncation disagreement, as a Number exponent-safe string */
  agreement: string;
  escalated: boolean;
  quarantined: boolean;
}

interface Integrand {
  g: (t: Decimal) => Decimal;   // log integrand
  lnC: Decimal;                 // log prefactor
  t0: Decimal;                  // saddle estimate
}

function buildIntegrand(ctx: MpCtx, p: NigPoint): Integrand {
  const x = ctx.dec(p.x);
  const alpha = ctx.dec(p.alpha);
  const beta = ctx.dec(p.beta);
  const mu = ctx.dec(p.mu);
  const delta = ctx.dec(p.delta);
  const gamma = alpha.sub(beta).mul(alpha.add(beta)).sqrt();
  const xm = x.sub(mu);
  const lnC = delta.ln().add(delta.mul(gamma)).sub(ctx.pi().mul(2).ln().div(2));
  const d2 = delta.mul(delta);
  const g2 = gamma.mul(gamma);

  const g = (t: Decimal): Decimal => {
    const rt = t.sqrt();
    const u = xm.sub(beta.mul(t)).div(rt);
    return ctx.logPhi(u)
      .sub(d2.div(t.mul(2)))
      .sub(g2.mul(t).div(2))
      .sub(t.ln().mul(1.5));
  };

  // saddle candidates from the two quadratic closed forms; keep the argmax
  const om = xm.mul(xm).add(d2).sqrt();
  const tGd = gamma.mul(delta).pow(2).add(2.25).sqrt().sub(1.5).div(g2);
  const tAw = alpha.mul(om).pow(2).add(2.25).sqrt().sub(1.5).div(alpha.mul(alpha));
  const t0 = g(tGd).gte(g(tAw)) ? tGd : tAw;
  return { g, lnC, t0 };
}

interface Node {
  w: Decimal;    // weight factor, interval-independent
  sig: Decimal;  // distance from the nearer endpoint as a fraction of length
}

// node tables keyed by (precision, relDigits, level); write-once
const NODE_CACHE = new Map<string, Node[]>();

function levelNodes(relDigits: number, level: number): Node[] {
  const key = `${Decimal.precision}:${relDigits}:${level}`;
  const got = NODE_CACHE.get(key);
  if (got) return got;
  const halfPi = Decimal.acos(-1).div(2);
  const tMax = Decimal.asinh(
    new Decimal(relDigits + 6).mul(Decimal.ln(10)).add(5).div(Decimal.acos(-1)),
  ).toNumber();
  const wCut = new Decimal(10).pow(-(relDigits + 9));
  const h = Math.pow(0.5, level);
  const start = level === 0 ? 0 : 1;
  const step = level === 0 ? 1 : 2;
  const out: Node[] = [];
  for (let j = start; j * h <= tMax; j += step) {
    const t = new Decimal(j).mul(h);
    const q = Decimal.exp(halfPi.mul(2).mul(t.sinh()).neg()); // e^{-pi sinh t}
    const w = halfPi.mul(t.cosh()).mul(4).mul(q).div(q.add(1).pow(2));
    if (w.lt(wCut) && j > 2) break;   // f is O(1): tail weights are negligible
    out.push({ w, sig: q.div(q.add(1)) });
  }
  NODE_CACHE.set(key, out);
  return out;
}

/** Level-doubling tanh-sinh over (a, b) for a normalized integrand with
 *  f <= O(1).  Converges on a relative target with an absolute floor tied
 *  to `scale` (the width of the region that matters), so segments whose
 *  early levels sample only zeros are not accepted prematurely. */
function tanhSinh(f: (t: Decimal) => Decimal, a: Decimal, b: Decimal,
                  relDigits: number, scale: Decimal, maxLevel = 14): Decimal {
  const len = b.sub(a);
  const half = len.div(2);
  const target = new Decimal(10).pow(-relDigits);
  const absFloor = new Decimal(10).pow(-(relDigits + 6)).mul(Decimal.min(len, scale));
  let total = new Decimal(0);
  let prevDiff: Decimal | null = null;
  let prev: Decimal | null = null;
  for (let level = 0; level <= maxLevel; level++) {
    const h = Math.pow(0.5, level);
    let acc = new Decimal(0);
    const nodes = levelNodes(relDigits, level);
    for (let i = 0; i < nodes.length; i++) {
      const { w, sig } = nodes[i];
      if (level === 0 && i === 0) {
        acc = acc.add(w.mul(f(a.add(half))));
        continue;
      }
      const d = len.mul(sig);
      acc = acc.add(w.mul(f(b.sub(d)).add(f(a.add(d)))));
    }
    total = level === 0 ? acc.mul(h).mul(half) : total.div(2).add(acc.mul(h).mul(half));
    if (prev !== null) {
      const diff = total.sub(prev).abs();
      const goal = Decimal.max(total.abs().mul(target), absFloor);
      const geometric = diff.isZero() ? level >= 4
        : (prevDiff !== null && level >= 3 && diff.lte(prevDiff.mul(0.3)));
      if (diff.lte(goal) && geometric) {
        return total;
      }
      prevDiff = diff;
    }
    prev = total;
  }
  return total;
}

function upperLimit(ctx: MpCtx, p: NigPoint, g0: Decimal,
                    intg: Integrand, relDigits: number): Decimal {
  // march outward until the integrand is negligible relative to the peak
  const target = new Decimal(10).pow(-(relDigits + 6)).ln();
  let hi = intg.t0.mul(2);
  for (let i = 0; i < 4000; i++) {
    if (intg.g(hi).sub(g0).lte(target.sub(hi.add(1).ln()))) break;
    hi = hi.mul(2);
  }
  return hi;
}

function integrate(ctx: MpCtx, p: NigPoint, nMult: number, relDigits: number): Decimal {
  const intg = buildIntegrand(ctx, p);
  const g0 = intg.g(intg.t0);
  const hi = upperLimit(ctx, p, g0, intg, relDigits).mul(nMult);
  const f = (t: Decimal) => {
    const v = intg.g(t).sub(g0);
    return v.lt(-2.4 * (relDigits + 12)) ? new Decimal(0) : Decimal.exp(v);
  };
  const zero = new Decimal(0);
  const cuts = [zero, intg.t0.div(8), intg.t0, Decimal.min(intg.t0.mul(8), hi), hi]
    .filter((c, i, arr) => c.gte(0) && c.lte(hi) && (i === 0 || c.gt(arr[i - 1])));
  const scale = intg.t0.add(1);
  let total = new Decimal(0);
  for (let i = 0; i + 1 < cuts.length; i++) {
    total = total.add(tanhSinh(f, cuts[i], cuts[i + 1], relDigits, scale));
  }
  if (total.lte(0)) return new Decimal(0);
  return Decimal.exp(intg.lnC.add(g0).add(total.ln()));
}

export function referenceCdf(p: NigPoint, digits = 100,
                             escalationDigits = 300): OracleResult {
  if (p.beta === 0 && p.x === p.mu) {
    return { value: "0.5", agreement: "0", escalated: false, quarantined: false };
  }
  const attempt = (dps: number) => withPrecision(dps + 20, (ctx) => {
    const v1 = integrate(ctx, p, 1, dps);
    const v2 = integrate(ctx, p, 2, dps);
    const scale = Decimal.max(v1.abs(), new Decimal(10).pow(-300));
    const agree = v1.sub(v2).abs().div(scale);
    return { v1, agree };
  });
  let dps = digits;
  let { v1, agree } = attempt(dps);
  let escalated = false;
  if (agree.gt(new Decimal(10).pow(-25))) {
    escalated = true;
    dps = escalationDigits;
    ({ v1, agree } = attempt(dps));
  }
  const quarantined = agree.gt(new Decimal(10).pow(-25));
  return {
    value: withPrecision(40, () => v1.toSignificantDigits(32).toString()),
    agreement: agree.toExponential(3),
    escalated,
    quarantined,
  };
}
