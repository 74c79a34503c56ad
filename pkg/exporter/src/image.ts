/*
Image loading and the fixed inference preprocessing: decode PNG, drop alpha,
scale to [0,1], bilinear-resize the shorter side to the target, center crop.
One code path, no augmentation, so a file always maps to the same pixels.
*/

import { PNG } from 'pngjs';

export interface RgbImage {
  width: number;
  height: number;
  data: Float32Array; // HWC, RGB, [0,1]
}

export function decodePng(buf: Buffer): RgbImage {
  const png = PNG.sync.read(buf);
  const out = new Float32Array(png.width * png.height * 3);
  for (let i = 0, j = 0; i < png.data.length; i += 4, j += 3) {
    out[j] = png.data[i] / 255;
    out[j + 1] = png.data[i + 1] / 255;
    out[j + 2] = png.data[i + 2] / 255;
  }
  return { width: png.width, height: png.height, data: out };
}

function sample(img: RgbImage, x: number, y: number, c: number): number {
  return img.data[(y * img.width + x) * 3 + c];
}

export function resizeBilinear(img: RgbImage, width: number, height: number): RgbImage {
  const out = new Float32Array(width * height * 3);
  const sx = img.width / width;
  const sy = img.height / height;
  for (let y = 0; y < height; y++) {
    const fy = Math.min(Math.max((y + 0.5) * sy - 0.5, 0), img.height - 1);
    const y0 = Math.floor(fy);
    const y1 = Math.min(y0 + 1, img.height - 1);
    const wy = fy - y0;
    for (let x = 0; x < width; x++) {
      const fx = Math.min(Math.max((x + 0.5) * sx - 0.5, 0), img.width - 1);
      const x0 = Math.floor(fx);
      const x1 = Math.min(x0 + 1, img.width - 1);
      const wx = fx - x0;
      for (let c = 0; c < 3; c++) {
        const top = sample(img, x0, y0, c) * (1 - wx) + sample(img, x1, y0, c) * wx;
        const bot = sample(img, x0, y1, c) * (1 - wx) + sample(img, x1, y1, c) * wx;
        out[(y * width + x) * 3 + c] = top * (1 - wy) + bot * wy;
      }
    }
  }
  return { width, height, data: out };
}

export function centerCrop(img: RgbImage, size: number): RgbImage {
  if (img.width < size || img.height < size) {
    throw new Error(`image ${img.width}x${img.height} smaller than crop ${size}`);
  }
  const left = Math.floor((img.width - size) / 2);
  const top = Math.floor((img.height - size) / 2);
  const out = new Float32Array(size * size * 3);
  for (let y = 0; y < size; y++) {
    for (let x = 0; x < size; x++) {
      for (let c = 0; c < 3; c++) {
        out[(y * size + x) * 3 + c] = sample(img, left + x, top + y, c);
      }
    }
  }
  return { width: size, height: size, data: out };
}

/* PNG bytes to a size x size x 3 pixel block ready for the backbone. */
export function preprocess(buf: Buffer, size: number): Float32Array {
  const img = decodePng(buf);
  const scale = size / Math.min(img.width, img.height);
  const resized = resizeBilinear(
    img,
    Math.max(size, Math.round(img.width * scale)),
    Math.max(size, Math.round(img.height * scale)),
  );
  return centerCrop(resized, size).data;
}

export const PREPROCESS_NOTE =
  'RGB in [0,1]; bilinear resize shorter side to the model input size; center crop';
