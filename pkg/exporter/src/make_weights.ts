/*
One-shot generator for the committed backbone weights. Deterministic: a fixed
seed drives a small PRNG, so rerunning reproduces the blob byte for byte.
Kept in the repo only so the provenance of weights/patchnet-64.bin is clear.
*/

import { writeFileSync, mkdirSync } from 'node:fs';
import { fileURLToPath, pathToFileURL } from 'node:url';
import { BACKBONES, weightsUrl } from './backbone.js';

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function gaussianPairs(uniform: () => number): () => number {
  let spare: number | null = null;
  return () => {
    if (spare !== null) {
      const v = spare;
      spare = null;
      return v;
    }
    let u = 0;
    let v = 0;
    do {
      u = uniform();
    } while (u === 0);
    v = uniform();
    const r = Math.sqrt(-2 * Math.log(u));
    spare = r * Math.sin(2 * Math.PI * v);
    return r * Math.cos(2 * Math.PI * v);
  };
}

function fill(out: Float32Array, start: number, count: number, std: number, next: () => number): number {
  for (let i = 0; i < count; i++) out[start + i] = Math.fround(next() * std);
  return start + count;
}

export function buildPatchnetWeights(): Float32Array {
  const spec = BACKBONES['patchnet-64'];
  const all = new Float32Array(spec.weightsBytes / 4);
  const next = gaussianPairs(mulberry32(64064));
  let at = 0;
  at = fill(all, at, 16 * 3 * 9, Math.sqrt(2 / (3 * 9)), next); // conv1 weight
  at += 16; // conv1 bias stays zero
  at = fill(all, at, 32 * 16 * 9, Math.sqrt(2 / (16 * 9)), next); // conv2 weight
  at += 32; // conv2 bias stays zero
  at = fill(all, at, 64 * 32, Math.sqrt(1 / 32), next); // fc weight
  at += 64; // fc bias stays zero
  if (at !== all.length) throw new Error(`filled ${at} of ${all.length} floats`);
  return all;
}

function main(): void {
  const blob = buildPatchnetWeights();
  const target = fileURLToPath(weightsUrl('patchnet-64'));
  mkdirSync(new URL('../weights/', import.meta.url), { recursive: true });
  writeFileSync(target, Buffer.from(blob.buffer, blob.byteOffset, blob.byteLength));
  console.log(`wrote ${blob.length * 4} bytes to ${target}`);
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  main();
}
