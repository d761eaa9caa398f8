/**
 * Thin TypeScript wrapper around the `ucc` evaluator.
 *
 * Arrays in, plain records out: every call writes the arrays to a
 * temporary CSV, invokes the CLI, and returns the relevant section of its
 * JSON report. The wrapper computes nothing itself, so every number is
 * bit-for-bit the evaluator's own (JSON floats round-trip exactly between
 * the two runtimes). Evaluator errors surface as {@link EvaluatorError}
 * with `name` set to the core error class (e.g. "NegativeBand") and the
 * offending index or line in the message.
 *
 * The CLI is resolved from `UCC_CLI` (a command line, split on spaces) or
 * defaults to `ucc` on PATH.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export type NumericArray = ArrayLike<number>;

/** Four equal-length columns plus a flag for how lower/upper are meant. */
export interface BoundArrays {
  y: NumericArray;
  yHat: NumericArray;
  /** Interval edges when `form` is "bounds"; widths below/above the prediction when "bands". */
  lower: NumericArray;
  upper: NumericArray;
  form: "bounds" | "bands";
}

export type Coords = "bw-miss" | "ex-miss" | "ex-def";
export type Rule = "rect" | "trap";
export type Window = [number, number];

export interface CurvePoint {
  k: number;
  x: number;
  y: number;
  miss_rate: number;
  bandwidth: number;
  excess: number;
  deficit: number;
}

export interface CurveRecord {
  points: CurvePoint[];
  auucc_rect: number | null;
  auucc_trap: number | null;
  miss_floor: number;
}

export interface GainRecord {
  auucc_model: number;
  auucc_const: number;
  gain_percent: number;
  partial_window: [number, number] | null;
}

export interface CompareRecord {
  observed_diff: number;
  p_value: number;
  n_permutations: number;
  seed: number;
}

export interface CalibrateRecord {
  q_hat: number;
  alpha: number;
  n: number;
  achieved_coverage: number;
}

export interface CostRecord {
  c: number;
  k_star: number;
  min_cost: number;
  isocost_slope: number | null;
  evaluations: [number, number][];
}

/** An evaluator-side failure; `name` carries the core error class. */
export class EvaluatorError extends Error {
  constructor(name: string, message: string) {
    super(message);
    this.name = name;
  }
}

function cliCommand(): string[] {
  const override = process.env.UCC_CLI;
  return override ? override.split(" ").filter((s) => s.length > 0) : ["ucc"];
}

function writeCsv(path: string, arrays: BoundArrays): void {
  const { y, yHat, lower, upper, form } = arrays;
  const n = y.length;
  if (yHat.length !== n || lower.length !== n || upper.length !== n) {
    throw new EvaluatorError(
      "LengthMismatch",
      `columns must have equal length, got ${n}/${yHat.length}/${lower.length}/${upper.length}`,
    );
  }
  const header =
    form === "bounds" ? "y,y_hat,y_lower,y_upper" : "y,y_hat,z_lower,z_upper";
  const lines = [header];
  for (let i = 0; i < n; i++) {
    // String(number) is the shortest round-trip decimal; the evaluator
    // parses it back to the identical float64.
    lines.push(`${y[i]},${yHat[i]},${lower[i]},${upper[i]}`);
  }
  writeFileSync(path, lines.join("\n") + "\n");
}

function formatFlag(form: "bounds" | "bands"): string {
  return form === "bounds" ? "csv-bounds" : "csv-bands";
}

function run(args: string[], reportPath: string): any {
  const [command, ...prefix] = cliCommand();
  const result = spawnSync(command, [...prefix, ...args], { encoding: "utf8" });
  if (result.error) {
    throw result.error;
  }
  if (result.status !== 0) {
    const firstLine = (result.stderr || "").trim().split("\n")[0] ?? "";
    const match = /^([A-Za-z_][A-Za-z0-9_]*): (.*)$/.exec(firstLine);
    if (match) {
      throw new EvaluatorError(match[1], match[2]);
    }
    throw new EvaluatorError(
      result.status === 2 ? "UsageError" : "EvaluatorFailure",
      firstLine || `exit status ${result.status}`,
    );
  }
  return JSON.parse(readFileSync(reportPath, "utf8"));
}

function withTempDir<T>(body: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "ucc-bind-"));
  try {
    return body(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

/** Build the characteristics curve of one model. */
export function curve(arrays: BoundArrays, coords: Coords = "bw-miss"): CurveRecord {
  return withTempDir((dir) => {
    const input = join(dir, "input.csv");
    const out = join(dir, "report.json");
    writeCsv(input, arrays);
    const report = run(
      ["curve", "--input", input, "--format", formatFlag(arrays.form),
       "--coords", coords, "--out", out],
      out,
    );
    const summary = report.curves[0];
    return {
      points: summary.points,
      auucc_rect: summary.auucc.rectangular,
      auucc_trap: summary.auucc.trapezoidal,
      miss_floor: summary.miss_floor,
    };
  });
}

/** Area gain over the constant-band reference, optionally windowed. */
export function gain(
  arrays: BoundArrays,
  options: { coords?: Coords; window?: Window; rule?: Rule } = {},
): GainRecord {
  return withTempDir((dir) => {
    const input = join(dir, "input.csv");
    const out = join(dir, "report.json");
    writeCsv(input, arrays);
    const args = [
      "gain", "--input", input, "--format", formatFlag(arrays.form),
      "--coords", options.coords ?? "bw-miss",
      "--rule", options.rule ?? "rect",
      "--out", out,
    ];
    if (options.window) {
      args.push("--window", `${options.window[0]}:${options.window[1]}`);
    }
    const report = run(args, out);
    return report.gain;
  });
}

/** Paired permutation test of the area difference between two models. */
export function compare(
  a: BoundArrays,
  b: BoundArrays,
  options: { nPerm: number; seed: number; coords?: Coords; window?: Window },
): CompareRecord {
  if (a.form !== b.form) {
    throw new EvaluatorError("FormMismatch", "both models must use the same form");
  }
  return withTempDir((dir) => {
    const inputA = join(dir, "a.csv");
    const inputB = join(dir, "b.csv");
    const out = join(dir, "report.json");
    writeCsv(inputA, a);
    writeCsv(inputB, b);
    const args = [
      "compare", "--input-a", inputA, "--input-b", inputB,
      "--format", formatFlag(a.form),
      "--coords", options.coords ?? "bw-miss",
      "--n-perm", String(options.nPerm), "--seed", String(options.seed),
      "--out", out,
    ];
    if (options.window) {
      args.push("--window", `${options.window[0]}:${options.window[1]}`);
    }
    const report = run(args, out);
    return report.test;
  });
}

/** Fit the conformal scale factor on a calibration set. */
export function calibrate(arrays: BoundArrays, alpha: number): CalibrateRecord {
  return withTempDir((dir) => {
    const input = join(dir, "input.csv");
    const out = join(dir, "report.json");
    writeCsv(input, arrays);
    const report = run(
      ["calibrate", "--input", input, "--format", formatFlag(arrays.form),
       "--alpha", String(alpha), "--out", out],
      out,
    );
    return report.calibration;
  });
}

/** Minimum linear cost over the candidate scales. */
export function cost(arrays: BoundArrays, c: number): CostRecord {
  return withTempDir((dir) => {
    const input = join(dir, "input.csv");
    const out = join(dir, "report.json");
    writeCsv(input, arrays);
    const report = run(
      ["cost", "--input", input, "--format", formatFlag(arrays.form),
       "--c", String(c), "--out", out],
      out,
    );
    const record = report.cost;
    return {
      c: record.c,
      k_star: record.k_star,
      min_cost: record.min_cost,
      isocost_slope: record.isocost_slope,
      evaluations: record.evaluations,
    };
  });
}
