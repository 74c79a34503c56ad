#!/usr/bin/env node
/*
Command line entry point. One subcommand:

  feature-export export --images DIR --backbone NAME --out DIR
                        [--image-size N] [--batch-size N]
*/

import { parseArgs } from 'node:util';
import { exportFeatures } from './export.js';
import { BACKBONES } from './backbone.js';

const USAGE =
  'usage: feature-export export --images DIR --backbone NAME --out DIR ' +
  '[--image-size N] [--batch-size N]';

function usageError(message: string): never {
  console.error(`error: ${message}`);
  console.error(USAGE);
  process.exit(2);
}

function parsePositive(raw: string | undefined, flag: string): number | undefined {
  if (raw === undefined) return undefined;
  const value = Number(raw);
  if (!Number.isInteger(value) || value <= 0) usageError(`${flag} must be a positive integer`);
  return value;
}

function main(argv: string[]): void {
  const [command, ...rest] = argv;
  if (command !== 'export') {
    usageError(command ? `unknown command "${command}"` : 'missing command');
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: rest,
      options: {
        images: { type: 'string' },
        backbone: { type: 'string' },
        out: { type: 'string' },
        'image-size': { type: 'string' },
        'batch-size': { type: 'string' },
      },
      allowPositionals: false,
    });
  } catch (err) {
    usageError(err instanceof Error ? err.message : String(err));
  }
  const { images, backbone, out } = parsed.values;
  if (!images || !backbone || !out) {
    usageError('--images, --backbone, and --out are all required');
  }
  if (!(backbone in BACKBONES)) {
    usageError(`unknown backbone "${backbone}"; available: ${Object.keys(BACKBONES).join(', ')}`);
  }

  try {
    const result = exportFeatures({
      imagesDir: images,
      backbone,
      outDir: out,
      imageSize: parsePositive(parsed.values['image-size'], '--image-size'),
      batchSize: parsePositive(parsed.values['batch-size'], '--batch-size'),
    });
    const skipNote = result.skipped > 0 ? ` (${result.skipped} skipped)` : '';
    console.log(
      `exported ${result.count} images${skipNote} from ${result.classNames.length} classes to ${result.outDir}`,
    );
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    process.exit(1);
  }
}

main(process.argv.slice(2));
