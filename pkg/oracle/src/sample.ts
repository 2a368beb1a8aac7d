/** Deterministic parameter sampling over the benchmark ranges. */

import { NigPoint } from "./nig";

export type CaseName = "beta0" | "xmu" | "general";
export type RegionName = "small" | "large";

interface Ranges {
  x: [number, number];
  alpha: [number, number];
  beta: [number, number];
  mu: [number, number];
  delta: [number, number];
}

const SMALL: Ranges = { x: [-5, 5], alpha: [0.001, 5], beta: [-5, 5], mu: [-5, 5], delta: [0.001, 5] };
const LARGE: Ranges = { x: [-10, 10], alpha: [0.001, 50], beta: [-50, 50], mu: [-10, 10], delta: [0.001, 50] };

/** mulberry32: tiny deterministic PRNG, same stream on every platform */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function uniform(rng: () => number, lo: number, hi: number): number {
  return lo + (hi - lo) * rng();
}

export function samplePoints(caseName: CaseName, region: RegionName,
                             count: number, seed: number): NigPoint[] {
  const r = region === "small" ? SMALL : LARGE;
  const rng = mulberry32(seed);
  const out: NigPoint[] = [];
  while (out.length < count) {
    const alpha = uniform(rng, ...r.alpha);
    const beta = caseName === "beta0" ? 0 : uniform(rng, ...r.beta);
    if (Math.abs(beta) >= alpha) continue;
    if (Math.sqrt((alpha - beta) * (alpha + beta)) < 1e-12) continue;
    const delta = uniform(rng, ...r.delta);
    if (caseName === "xmu") {
      out.push({ x: 0, alpha, beta, mu: 0, delta });
    } else {
      const mu = uniform(rng, ...r.mu);
      out.push({ x: uniform(rng, ...r.x), alpha, beta, mu, delta });
    }
  }
  return out;
}
