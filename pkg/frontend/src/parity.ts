// Parity battery: the bindings versus a library-API reference oracle.
//
// For each (signal, config, seed) triple the same float32 input is pushed
// through two routes: augmentSample (this package, over the CLI) and
// reference.py (the library API directly). Outputs must be bit-identical
// and the decision descriptions must agree.

import { execFileSync } from "node:child_process";
import { mkdirSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { augmentSample, type PolicyOptions } from "./index.js";
import { readWavFloat32, writeWavFloat32 } from "./wav.js";

const PYTHON = process.env.PITCHAUG_PYTHON ?? "python3";
const REFERENCE = join(dirname(fileURLToPath(import.meta.url)), "..", "reference.py");

export interface Triple {
  samples: Float32Array;
  sampleRate: number;
  gender: "F" | "M";
  options: PolicyOptions;
  epoch: number;
  sampleId: string;
  baseSeed: number;
}

/** Harmonic vowel-like signal; deterministic for a given index. */
function makeSignal(index: number, sampleRate: number): Float32Array {
  const f0 = 100 + (index * 13) % 180; // 100..280 Hz
  const seconds = 0.5 + (index % 3) * 0.25;
  const n = Math.round(seconds * sampleRate);
  const out = new Float32Array(n);
  for (let i = 0; i < n; i++) {
    const t = i / sampleRate;
    let v = 0;
    for (let h = 1; h <= 8; h++) {
      v += Math.sin(2 * Math.PI * f0 * h * t) / h;
    }
    out[i] = Math.fround(0.3 * v);
  }
  return out;
}

export function makeTriples(count: number, sampleRate = 16000): Triple[] {
  const forced: Array<PolicyOptions["forceTarget"]> = [undefined, "F", "M", "same"];
  const triples: Triple[] = [];
  for (let i = 0; i < count; i++) {
    const options: PolicyOptions =
      i % 2 === 0
        ? { policy: "random", pRandom: 0.3 + 0.1 * (i % 7) }
        : { policy: "opposite", pFemaleToMale: 0.3 + 0.1 * (i % 5), pMaleToFemale: 0.7 - 0.1 * (i % 4) };
    if (i % 5 === 4) options.noFormantShift = true;
    if (i % 7 === 6) options.noGenderSwitch = true;
    if (i % 11 === 10) {
      options.betaToFemale = 1.15;
      options.betaToMale = 0.85;
    }
    options.forceTarget = forced[i % 4];
    triples.push({
      samples: makeSignal(i, sampleRate),
      sampleRate,
      gender: i % 3 === 0 ? "F" : "M",
      options,
      epoch: i % 4,
      sampleId: `parity-${i}`,
      baseSeed: 1000 + i,
    });
  }
  return triples;
}

function runReference(triple: Triple, dir: string): { samples: Float32Array; decision: string } {
  const input = join(dir, "ref-in.wav");
  const output = join(dir, "ref-out.wav");
  writeWavFloat32(input, triple.samples, triple.sampleRate);
  const spec = {
    input,
    output,
    gender: triple.gender,
    policy: triple.options.policy ?? "random",
    p_f2m: triple.options.pFemaleToMale,
    p_m2f: triple.options.pMaleToFemale,
    p_r: triple.options.pRandom,
    beta_f: triple.options.betaToFemale,
    beta_m: triple.options.betaToMale,
    no_formant_shift: triple.options.noFormantShift ?? false,
    no_gender_switch: triple.options.noGenderSwitch ?? false,
    force_target: triple.options.forceTarget ?? null,
    epoch: triple.epoch,
    sample_id: triple.sampleId,
    base_seed: triple.baseSeed,
  };
  const stdout = execFileSync(PYTHON, [REFERENCE, JSON.stringify(spec)], {
    encoding: "utf-8",
  });
  return { samples: readWavFloat32(output).samples, decision: stdout.trim() };
}

function bitIdentical(a: Float32Array, b: Float32Array): boolean {
  if (a.length !== b.length) return false;
  const ba = new Uint8Array(a.buffer, a.byteOffset, a.byteLength);
  const bb = new Uint8Array(b.buffer, b.byteOffset, b.byteLength);
  for (let i = 0; i < ba.length; i++) {
    if (ba[i] !== bb[i]) return false;
  }
  return true;
}

export function checkTriple(triple: Triple, dir: string): string | null {
  const bound = augmentSample(
    triple.samples, triple.sampleRate, triple.gender,
    triple.options, triple.epoch, triple.sampleId, triple.baseSeed,
  );
  const ref = runReference(triple, dir);
  if (!bitIdentical(bound.samples, ref.samples)) {
    return `${triple.sampleId}: arrays differ (${bound.samples.length} vs ${ref.samples.length})`;
  }
  const boundDecision = bound.decision.slice(bound.decision.indexOf("decision="));
  // enum value spellings differ between the two surfaces on purpose;
  // normalize the CLI's short names to the library's
  const normalized = boundDecision
    .replace("decision=cross ", "decision=cross_gender ")
    .replace("decision=within ", "decision=within_gender ");
  if (normalized !== ref.decision && boundDecision !== ref.decision) {
    return `${triple.sampleId}: decisions differ: '${boundDecision}' vs '${ref.decision}'`;
  }
  return null;
}

export function runParity(count: number, workdir: string): boolean {
  mkdirSync(workdir, { recursive: true });
  let failures = 0;
  for (const triple of makeTriples(count)) {
    const err = checkTriple(triple, workdir);
    if (err !== null) {
      failures++;
      console.error(`FAIL ${err}`);
    }
  }
  console.log(`parity_ok=${failures === 0} triples=${count} failures=${failures}`);
  return failures === 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;

if (invokedDirectly) {
  let count = 50;
  let workdir = mkdtempSync(join(tmpdir(), "pitchaug-parity-"));
  const args = process.argv.slice(2);
  for (let i = 0; i < args.length; i++) {
    if (args[i] === "--triples") count = Number(args[++i]);
    else if (args[i] === "--workdir") workdir = args[++i];
  }
  process.exit(runParity(count, workdir) ? 0 : 1);
}
