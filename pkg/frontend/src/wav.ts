// Minimal RIFF/WAVE float32 reader and writer.
//
// Only IEEE-float mono is supported: that is the exact format the primary
// CLI reads and writes for bit-identical round trips. Chunks other than
// fmt/data are skipped.

import { readFileSync, writeFileSync } from "node:fs";

export interface WavData {
  samples: Float32Array;
  sampleRate: number;
}

const FORMAT_IEEE_FLOAT = 3;

export function readWavFloat32(path: string): WavData {
  const buf = readFileSync(path);
  if (buf.toString("ascii", 0, 4) !== "RIFF" || buf.toString("ascii", 8, 12) !== "WAVE") {
    throw new Error(`${path}: not a RIFF/WAVE file`);
  }

  let sampleRate = 0;
  let formatTag = 0;
  let channels = 0;
  let bitsPerSample = 0;
  let data: Buffer | null = null;

  let offset = 12;
  while (offset + 8 <= buf.length) {
    const id = buf.toString("ascii", offset, offset + 4);
    const size = buf.readUInt32LE(offset + 4);
    const body = offset + 8;
    if (id === "fmt ") {
      formatTag = buf.readUInt16LE(body);
      channels = buf.readUInt16LE(body + 2);
      sampleRate = buf.readUInt32LE(body + 4);
      bitsPerSample = buf.readUInt16LE(body + 14);
    } else if (id === "data") {
      data = buf.subarray(body, body + size);
    }
    offset = body + size + (size % 2); // chunks are word-aligned
  }

  if (data === null) throw new Error(`${path}: missing data chunk`);
  if (formatTag !== FORMAT_IEEE_FLOAT || bitsPerSample !== 32 || channels !== 1) {
    throw new Error(
      `${path}: expected mono float32 WAV, got format=${formatTag} ` +
      `bits=${bitsPerSample} channels=${channels}`,
    );
  }

  const samples = new Float32Array(data.length / 4);
  for (let i = 0; i < samples.length; i++) {
    samples[i] = data.readFloatLE(i * 4);
  }
  return { samples, sampleRate };
}

export function writeWavFloat32(path: string, samples: Float32Array, sampleRate: number): void {
  const dataSize = samples.length * 4;
  const buf = Buffer.allocUnsafe(44 + dataSize);
  buf.write("RIFF", 0, "ascii");
  buf.writeUInt32LE(36 + dataSize, 4);
  buf.write("WAVE", 8, "ascii");
  buf.write("fmt ", 12, "ascii");
  buf.writeUInt32LE(16, 16);
  buf.writeUInt16LE(FORMAT_IEEE_FLOAT, 20);
  buf.writeUInt16LE(1, 22); // mono
  buf.writeUInt32LE(sampleRate, 24);
  buf.writeUInt32LE(sampleRate * 4, 28); // byte rate
  buf.writeUInt16LE(4, 32); // block align
  buf.writeUInt16LE(32, 34); // bits per sample
  buf.write("data", 36, "ascii");
  buf.writeUInt32LE(dataSize, 40);
  for (let i = 0; i < samples.length; i++) {
    buf.writeFloatLE(samples[i], 44 + i * 4);
  }
  writeFileSync(path, buf);
}
