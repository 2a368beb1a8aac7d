/**
 * Reference dataset generator.
 *
 * Usage:
 *   node dist/cli.js --case general --region small --count 100 --seed 301 \
 *        --out ref.csv [--digits 100] [--escalation-digits 300]
 */

import * as fs from "fs";
import { referenceCdf } from "./nig";
import { CaseName, RegionName, samplePoints } from "./sample";
import { HEADER, commentLine, formatRow } from "./csv";

interface Job {
  caseName: CaseName;
  region: RegionName;
  count: number;
  seed: number;
  digits: number;
  escalationDigits: number;
  out: string;
}

export function parseArgs(argv: string[]): Job {
  const get = (name: string, fallback?: string): string => {
    const i = argv.indexOf(`--${name}`);
    if (i >= 0 && i + 1 < argv.length) return argv[i + 1];
    if (fallback !== undefined) return fallback;
    throw new Error(`missing required flag --${name}`);
  };
  const job: Job = {
    caseName: get("case", "general") as CaseName,
    region: get("region", "small") as RegionName,
    count: parseInt(get("count", "100"), 10),
    seed: parseInt(get("seed", "1"), 10),
    digits: parseInt(get("digits", "100"), 10),
    escalationDigits: parseInt(get("escalation-digits", "300"), 10),
    out: get("out"),
  };
  if (!["beta0", "xmu", "general"].includes(job.caseName)) {
    throw new Error(`unknown case ${job.caseName}`);
  }
  if (!["small", "large"].includes(job.region)) {
    throw new Error(`unknown region ${job.region}`);
  }
  if (!(job.count >= 1) || !(job.digits >= 50)) {
    throw new Error("count must be >= 1 and digits >= 50");
  }
  return job;
}

export function generate(job: Job): { rows: number; quarantined: number } {
  const points = samplePoints(job.caseName, job.region, job.count, job.seed);
  const lines = [
    commentLine(job.caseName, job.region, job.count, job.seed, job.digits),
    HEADER,
  ];
  let quarantined = 0;
  points.forEach((p, i) => {
    const res = referenceCdf(p, job.digits, job.escalationDigits);
    if (res.quarantined) quarantined += 1;
    lines.push(formatRow(p, res, job.region));
    if ((i + 1) % 10 === 0) {
      process.stderr.write(`${job.caseName}/${job.region}: ${i + 1}/${points.length}\n`);
    }
  });
  fs.writeFileSync(job.out, lines.join("\n") + "\n");
  return { rows: points.length, quarantined };
}

if (require.main === module) {
  try {
    const job = parseArgs(process.argv.slice(2));
    const { rows, quarantined } = generate(job);
    process.stderr.write(`wrote ${rows} rows (${quarantined} quarantined) to ${job.out}\n`);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    process.exit(1);
  }
}
