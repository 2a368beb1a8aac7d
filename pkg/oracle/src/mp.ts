/**
 * Arbitrary-precision special functions on top of decimal.js:
 * the complementary error function and the standard normal CDF,
 * with precision-scoped evaluation helpers.
 */

import Decimal from "decimal.js";

export type Dec = Decimal;

const PI_CACHE = new Map<number, Decimal>();

export function withPrecision<T>(digits: number, fn: (ctx: MpCtx) => T): T {
  const saved = Decimal.precision;
  Decimal.set({ precision: digits, toExpNeg: -9e15, toExpPos: 9e15 });
  try {
    return fn(new MpCtx(digits));
  } finally {
    Decimal.set({ precision: saved });
  }
}

export class MpCtx {
  readonly digits: number;

  constructor(digits: number) {
    this.digits = digits;
  }

  dec(v: number | string): Decimal {
    return new Decimal(v);
  }

  pi(): Decimal {
    const got = PI_CACHE.get(Decimal.precision);
    if (got) return got;
    const val = Decimal.acos(-1);
    PI_CACHE.set(Decimal.precision, val);
    return val;
  }

  /** erfc = 1 - erf via the entire Maclaurin series at boosted working
   *  precision: the boost must absorb both the alternating cancellation
   *  inside the series AND the smallness of erfc itself (each costs about
   *  x^2 log10(e) digits). Used only for |x| <= 4. */
  private erfcSeries(x: Decimal): Decimal {
    const boost = Math.ceil(x.toNumber() ** 2 * 0.8686) + 12;
    const saved = Decimal.precision;
    Decimal.set({ precision: saved + boost });
    try {
      const x2 = x.mul(x);
      let term = new Decimal(x);
      let sum = new Decimal(x);
      const stop = new Decimal(10).pow(-(saved + boost));
      for (let k = 1; k < 100000; k++) {
        term = term.mul(x2).neg().div(k);
        const piece = term.div(2 * k + 1);
        sum = sum.add(piece);
        if (piece.abs().lt(sum.abs().mul(stop))) break;
      }
      const erf = sum.mul(2).div(this.pi().sqrt());
      const res = new Decimal(1).sub(erf);
      Decimal.set({ precision: saved });
      return res.add(0); // round into the caller's precision
    } finally {
      Decimal.set({ precision: saved });
    }
  }

  /** erfc for x > 4 via the Legendre continued fraction of Gamma(1/2, x^2);
   *  linear convergence, fast once x^2 is comparable to the digit count. */
  private erfcCF(x: Decimal): Decimal {
    const z = x.mul(x);
    const a = new Decimal(0.5);
    // Gamma(a, z) = e^-z z^a / (z + 1 - a - 1(1-a)/(z + 3 - a - 2(2-a)/(...)))
    const n = Math.max(24, Math.ceil(((this.digits + 10) * 2.303 / 4) ** 2 / z.toNumber()) + 16);
    let tail = new Decimal(0);
    for (let k = n; k >= 1; k--) {
      const kk = new Decimal(k);
      tail = kk.mul(kk.sub(a)).div(z.add(2 * k + 1).sub(a).sub(tail));
    }
    const gamma = Decimal.exp(z.neg()).mul(z.pow(a)).div(z.add(1).sub(a).sub(tail));
    return gamma.div(this.pi().sqrt());
  }

  erfc(x: Decimal): Decimal {
    if (x.isZero()) return new Decimal(1);
    if (x.isNegative()) return new Decimal(2).sub(this.erfc(x.neg()));
    if (x.toNumber() <= 4.0) {
      return this.erfcSeries(x);
    }
    return this.erfcCF(x);
  }

  /** standard normal CDF */
  phi(x: Decimal): Decimal {
    const arg = x.neg().div(new Decimal(2).sqrt());
    return this.erfc(arg).div(2);
  }

  logPhi(x: Decimal): Decimal {
    return this.phi(x).ln();
  }
}
