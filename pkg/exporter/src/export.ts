/*
Walk a folder-per-class image tree, embed every readable image with a frozen
backbone, and write the arrays the Python side consumes: features.npy,
labels.npy, a manifest pointing at both, and a label map sidecar.

Row order is fixed by sorted folder and file names alone. Batch size changes
how work is chunked, never what comes out.
*/

import { readdirSync, readFileSync, writeFileSync, mkdirSync } from 'node:fs';
import { join } from 'node:path';
import { loadBackbone } from './backbone.js';
import { preprocess, PREPROCESS_NOTE } from './image.js';
import { encodeFloat32Matrix, encodeInt64Vector } from './npy.js';

export interface ExportJob {
  imagesDir: string;
  backbone: string;
  outDir: string;
  imageSize?: number;
  batchSize?: number;
}

export interface ExportResult {
  count: number;
  skipped: number;
  classNames: string[];
  outDir: string;
}

function listClassDirs(root: string): string[] {
  const names = readdirSync(root, { withFileTypes: true })
    .filter((e) => e.isDirectory() && !e.name.startsWith('.'))
    .map((e) => e.name)
    .sort();
  if (names.length < 2) {
    throw new Error(`need at least 2 class folders under ${root}, found ${names.length}`);
  }
  return names;
}

function listImages(dir: string): string[] {
  return readdirSync(dir, { withFileTypes: true })
    .filter((e) => e.isFile() && !e.name.startsWith('.'))
    .map((e) => e.name)
    .sort();
}

export function exportFeatures(job: ExportJob): ExportResult {
  const backbone = loadBackbone(job.backbone);
  const size = job.imageSize ?? backbone.spec.imageSize;
  const batch = Math.max(1, job.batchSize ?? 32);
  const classNames = listClassDirs(job.imagesDir);

  // resolve the full ordered worklist first so batching cannot reorder rows
  const work: { path: string; label: number }[] = [];
  for (let label = 0; label < classNames.length; label++) {
    const dir = join(job.imagesDir, classNames[label]);
    for (const file of listImages(dir)) {
      work.push({ path: join(dir, file), label });
    }
  }

  const dim = backbone.spec.embeddingSize;
  const rows: Float32Array[] = [];
  const labels: bigint[] = [];
  const perClass = new Array<number>(classNames.length).fill(0);
  let skipped = 0;

  for (let start = 0; start < work.length; start += batch) {
    for (const item of work.slice(start, start + batch)) {
      let pixels: Float32Array;
      try {
        pixels = preprocess(readFileSync(item.path), size);
      } catch (err) {
        const reason = err instanceof Error ? err.message : String(err);
        console.warn(`skipping unreadable image ${item.path}: ${reason}`);
        skipped++;
        continue;
      }
      rows.push(backbone.embed(pixels));
      labels.push(BigInt(item.label));
      perClass[item.label]++;
    }
  }

  for (let label = 0; label < classNames.length; label++) {
    if (perClass[label] === 0) {
      throw new Error(`class folder "${classNames[label]}" produced no readable images`);
    }
  }

  const flat = new Float32Array(rows.length * dim);
  rows.forEach((row, i) => flat.set(row, i * dim));

  mkdirSync(job.outDir, { recursive: true });
  writeFileSync(join(job.outDir, 'features.npy'), encodeFloat32Matrix(rows.length, dim, flat));
  writeFileSync(join(job.outDir, 'labels.npy'), encodeInt64Vector(labels));
  writeFileSync(
    join(job.outDir, 'labels_map.json'),
    JSON.stringify(
      Object.fromEntries(classNames.map((name, label) => [String(label), name])),
      null,
      2,
    ) + '\n',
  );
  const manifest = [
    {
      features: 'features.npy',
      labels: 'labels.npy',
      split: 'train',
      class_names: classNames,
      backbone: backbone.spec.name,
      image_size: size,
      preprocess: PREPROCESS_NOTE,
    },
  ];
  writeFileSync(join(job.outDir, 'manifest.json'), JSON.stringify(manifest, null, 2) + '\n');

  return { count: rows.length, skipped, classNames, outDir: job.outDir };
}
