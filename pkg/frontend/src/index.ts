// In-process bindings over the pitchaug command line tool.
//
// Each call shells out to `python3 -m pitchaug.cli`, exchanging audio as
// mono float32 WAV so arrays cross the boundary bit-identically. Calls
// hold no shared state and are safe to issue concurrently.

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { readWavFloat32, writeWavFloat32 } from "./wav.js";

export type Gender = "F" | "M" | "auto";

export interface PolicyOptions {
  /** "random" (default) or "opposite". */
  policy?: "random" | "opposite";
  /** OPPOSITE: P(female -> male), default 0.30. */
  pFemaleToMale?: number;
  /** OPPOSITE: P(male -> female), default 0.70. */
  pMaleToFemale?: number;
  /** RANDOM: augmentation probability, default 0.50. */
  pRandom?: number;
  /** Formant scale toward female, default 1.2. */
  betaToFemale?: number;
  /** Formant scale toward male, default 0.8. */
  betaToMale?: number;
  /** Disable formant shifting on cross-gender moves. */
  noFormantShift?: boolean;
  /** Disable cross-gender targets (ablation). */
  noGenderSwitch?: boolean;
  /** Bypass the policy draw with a fixed target. */
  forceTarget?: "F" | "M" | "same";
}

export interface AugmentResult {
  samples: Float32Array;
  sampleRate: number;
  /** The decision line printed by the tool, e.g. "decision=cross target=F ...". */
  decision: string;
}

const PYTHON = process.env.PITCHAUG_PYTHON ?? "python3";

function runCli(args: string[]): string {
  try {
    return execFileSync(PYTHON, ["-m", "pitchaug.cli", ...args], {
      encoding: "utf-8",
      stdio: ["ignore", "pipe", "pipe"],
    });
  } catch (err) {
    const e = err as { stderr?: string; status?: number };
    const detail = e.stderr?.trim() || `exit code ${e.status}`;
    throw new Error(`pitchaug ${args[0]} failed: ${detail}`);
  }
}

function policyArgs(options: PolicyOptions): string[] {
  const args: string[] = [];
  if (options.policy) args.push("--policy", options.policy);
  if (options.pFemaleToMale !== undefined) args.push("--p-f2m", String(options.pFemaleToMale));
  if (options.pMaleToFemale !== undefined) args.push("--p-m2f", String(options.pMaleToFemale));
  if (options.pRandom !== undefined) args.push("--p-r", String(options.pRandom));
  if (options.betaToFemale !== undefined) args.push("--beta-f", String(options.betaToFemale));
  if (options.betaToMale !== undefined) args.push("--beta-m", String(options.betaToMale));
  if (options.noFormantShift) args.push("--no-formant-shift");
  if (options.noGenderSwitch) args.push("--no-gender-switch");
  if (options.forceTarget) args.push("--force-target", options.forceTarget);
  return args;
}

function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "pitchaug-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

/**
 * Apply one per-sample augmentation draw, bit-identical to the primary
 * pipeline for the same (config, epoch, sampleId, baseSeed).
 */
export function augmentSample(
  samples: Float32Array,
  sampleRate: number,
  gender: Gender,
  options: PolicyOptions,
  epoch: number,
  sampleId: string,
  baseSeed: number,
): AugmentResult {
  return withTempDir((dir) => {
    const input = join(dir, "in.wav");
    const output = join(dir, "out.wav");
    writeWavFloat32(input, samples, sampleRate);
    const stdout = runCli([
      "augment",
      "--input", input,
      "--output", output,
      "--gender", gender,
      "--seed", String(baseSeed),
      "--epoch", String(epoch),
      "--sample-id", sampleId,
      "--format", "float32",
      ...policyArgs(options),
    ]);
    const wav = readWavFloat32(output);
    return { samples: wav.samples, sampleRate: wav.sampleRate, decision: stdout.trim() };
  });
}

/** Log-mel filterbank features, one row per frame. */
export function logMel(
  samples: Float32Array,
  sampleRate: number,
  channels = 80,
): number[][] {
  return withTempDir((dir) => {
    const input = join(dir, "in.wav");
    const output = join(dir, "feats.tsv");
    writeWavFloat32(input, samples, sampleRate);
    runCli([
      "features",
      "--input", input,
      "--output", output,
      "--channels", String(channels),
    ]);
    const text = readFileSync(output, "utf-8").trimEnd();
    if (text === "") return [];
    return text.split("\n").map((line) => line.split("\t").map(Number));
  });
}

export { readWavFloat32, writeWavFloat32 } from "./wav.js";
