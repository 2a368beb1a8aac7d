/** ReferenceRecord CSV assembly, matching the verifier's expected format. */

import { NigPoint, OracleResult } from "./nig";

export const HEADER = "x,alpha,beta,mu,delta,cdf_ref,region_tag";

export function commentLine(caseName: string, region: string, count: number,
                            seed: number, digits: number): string {
  return `# NIG CDF reference, case=${caseName} region=${region} count=${count} ` +
    `seed=${seed} digits=${digits}`;
}

export function formatRow(p: NigPoint, res: OracleResult, region: string): string {
  let tag = region;
  if (res.quarantined) tag = "quarantine";
  else if (res.escalated) tag = `${region}-hard`;
  const nums = [p.x, p.alpha, p.beta, p.mu, p.delta].map((v) => fullPrecision(v));
  return [...nums, res.value, tag].join(",");
}

/** shortest round-trip decimal text of a double */
export function fullPrecision(v: number): string {
  let s = v.toString();
  if (Number(s) !== v) s = v.toPrecision(17);
  return s;
}
