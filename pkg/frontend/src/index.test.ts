import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import { augmentSample, logMel, readWavFloat32, writeWavFloat32 } from "./index.js";
import { checkTriple, makeTriples, runParity } from "./parity.js";

const SR = 16000;
const workdir = mkdtempSync(join(tmpdir(), "pitchaug-ts-"));

afterAll(() => rmSync(workdir, { recursive: true, force: true }));

function tone(f0: number, seconds: number): Float32Array {
  const n = Math.round(seconds * SR);
  const out = new Float32Array(n);
  for (let i = 0; i < n; i++) {
    out[i] = Math.fround(0.4 * Math.sin((2 * Math.PI * f0 * i) / SR));
  }
  return out;
}

describe("wav round trip", () => {
  it("preserves float32 samples bit-exactly", () => {
    const samples = tone(220, 0.1);
    const path = join(workdir, "rt.wav");
    writeWavFloat32(path, samples, SR);
    const back = readWavFloat32(path);
    expect(back.sampleRate).toBe(SR);
    expect(Buffer.from(back.samples.buffer)).toEqual(Buffer.from(samples.buffer));
  });
});

describe("augmentSample", () => {
  it("NONE decision returns the input unchanged", () => {
    const samples = tone(140, 0.5);
    const result = augmentSample(samples, SR, "M", { policy: "random", pRandom: 0.0 },
                                 0, "u1", 7);
    expect(result.decision).toContain("decision=none");
    expect(Buffer.from(result.samples.buffer)).toEqual(Buffer.from(samples.buffer));
  });

  it("is bit-identical across repeated calls", () => {
    const samples = tone(140, 0.5);
    const a = augmentSample(samples, SR, "M", { forceTarget: "F" }, 1, "u2", 7);
    const b = augmentSample(samples, SR, "M", { forceTarget: "F" }, 1, "u2", 7);
    expect(a.decision).toBe(b.decision);
    expect(Buffer.from(a.samples.buffer)).toEqual(Buffer.from(b.samples.buffer));
  });

  it("varies with the sample id", () => {
    const samples = tone(140, 0.5);
    const a = augmentSample(samples, SR, "M", { forceTarget: "F" }, 1, "u3", 7);
    const b = augmentSample(samples, SR, "M", { forceTarget: "F" }, 1, "u4", 7);
    expect(a.decision).not.toBe(b.decision);
  });

  it("propagates primary error messages", () => {
    const samples = tone(140, 0.5);
    expect(() =>
      augmentSample(samples, SR, "M", { policy: "random", pRandom: 1.5 }, 0, "u5", 7),
    ).toThrowError(/p_r/);
  });
});

describe("logMel", () => {
  it("yields 98 frames of 80 channels for 1 s at 16 kHz", () => {
    const feats = logMel(tone(220, 1.0), SR);
    expect(feats.length).toBe(98);
    expect(feats.every((row) => row.length === 80)).toBe(true);
    expect(feats.flat().every(Number.isFinite)).toBe(true);
  });
});

describe("parity with the primary component", () => {
  it("one spot-check triple matches bit-identically", () => {
    const [triple] = makeTriples(1);
    expect(checkTriple(triple, workdir)).toBeNull();
  });

  it("50 (signal, config, seed) triples are bit-identical", () => {
    expect(runParity(50, workdir)).toBe(true);
  }, 600_000);
});
