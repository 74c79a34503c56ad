/*
Small frozen convolutional backbone used to embed images. The weights ship
with the package as one little-endian float32 blob so every install produces
identical embeddings. No training code lives here; the blob is generated once
by make_weights.ts and committed.
*/

import { readFileSync } from 'node:fs';

export interface BackboneSpec {
  name: string;
  imageSize: number;
  embeddingSize: number;
  weightsBytes: number;
}

// layout of patchnet-64.bin, in order, all float32 LE:
//   conv1 weight (16,3,3,3) OIHW, conv1 bias (16),
//   conv2 weight (32,16,3,3),     conv2 bias (32),
//   fc weight (64,32),            fc bias (64)
const C1_OUT = 16;
const C2_OUT = 32;
const EMBED = 64;
const PATCHNET_FLOATS = C1_OUT * 3 * 9 + C1_OUT + C2_OUT * C1_OUT * 9 + C2_OUT + EMBED * C2_OUT + EMBED;

export const BACKBONES: Record<string, BackboneSpec> = {
  'patchnet-64': {
    name: 'patchnet-64',
    imageSize: 64,
    embeddingSize: EMBED,
    weightsBytes: PATCHNET_FLOATS * 4,
  },
};

interface Weights {
  c1w: Float32Array;
  c1b: Float32Array;
  c2w: Float32Array;
  c2b: Float32Array;
  fcw: Float32Array;
  fcb: Float32Array;
}

function splitWeights(all: Float32Array): Weights {
  let at = 0;
  const take = (n: number) => {
    const part = all.subarray(at, at + n);
    at += n;
    return part;
  };
  const w: Weights = {
    c1w: take(C1_OUT * 3 * 9),
    c1b: take(C1_OUT),
    c2w: take(C2_OUT * C1_OUT * 9),
    c2b: take(C2_OUT),
    fcw: take(EMBED * C2_OUT),
    fcb: take(EMBED),
  };
  if (at !== all.length) throw new Error(`weights blob has ${all.length} floats, expected ${at}`);
  return w;
}

/*
3x3 convolution with stride 2 and padding 1 followed by ReLU.
Input and output are CHW Float32Arrays.
*/
function convDown(
  input: Float32Array,
  inC: number,
  inS: number,
  weight: Float32Array,
  bias: Float32Array,
  outC: number,
): Float32Array {
  const outS = inS >> 1;
  const out = new Float32Array(outC * outS * outS);
  for (let oc = 0; oc < outC; oc++) {
    const wBase = oc * inC * 9;
    for (let oy = 0; oy < outS; oy++) {
      for (let ox = 0; ox < outS; ox++) {
        let acc = bias[oc];
        const iy0 = oy * 2 - 1;
        const ix0 = ox * 2 - 1;
        for (let ic = 0; ic < inC; ic++) {
          const inBase = ic * inS * inS;
          const wc = wBase + ic * 9;
          for (let ky = 0; ky < 3; ky++) {
            const iy = iy0 + ky;
            if (iy < 0 || iy >= inS) continue;
            for (let kx = 0; kx < 3; kx++) {
              const ix = ix0 + kx;
              if (ix < 0 || ix >= inS) continue;
              acc += weight[wc + ky * 3 + kx] * input[inBase + iy * inS + ix];
            }
          }
        }
        out[(oc * outS + oy) * outS + ox] = acc > 0 ? acc : 0;
      }
    }
  }
  return out;
}

export class Backbone {
  readonly spec: BackboneSpec;
  private weights: Weights;

  constructor(spec: BackboneSpec, blob: Buffer) {
    if (blob.length !== spec.weightsBytes) {
      throw new Error(`weights file is ${blob.length} bytes, expected ${spec.weightsBytes}`);
    }
    const aligned = new ArrayBuffer(blob.length);
    new Uint8Array(aligned).set(blob);
    this.spec = spec;
    this.weights = splitWeights(new Float32Array(aligned));
  }

  /* Embed one preprocessed HWC pixel block into a length-64 vector. */
  embed(pixels: Float32Array): Float32Array {
    const s = this.spec.imageSize;
    if (pixels.length !== s * s * 3) {
      throw new Error(`expected ${s * s * 3} pixel values, got ${pixels.length}`);
    }
    // HWC to CHW
    const chw = new Float32Array(3 * s * s);
    for (let y = 0; y < s; y++) {
      for (let x = 0; x < s; x++) {
        for (let c = 0; c < 3; c++) {
          chw[(c * s + y) * s + x] = pixels[(y * s + x) * 3 + c];
        }
      }
    }
    const w = this.weights;
    const h1 = convDown(chw, 3, s, w.c1w, w.c1b, C1_OUT); // 16 x s/2 x s/2
    const h2 = convDown(h1, C1_OUT, s >> 1, w.c2w, w.c2b, C2_OUT); // 32 x s/4 x s/4
    const side = s >> 2;
    const area = side * side;
    const pooled = new Float32Array(C2_OUT);
    for (let c = 0; c < C2_OUT; c++) {
      let acc = 0;
      const base = c * area;
      for (let i = 0; i < area; i++) acc += h2[base + i];
      pooled[c] = acc / area;
    }
    const out = new Float32Array(EMBED);
    for (let o = 0; o < EMBED; o++) {
      let acc = w.fcb[o];
      const base = o * C2_OUT;
      for (let i = 0; i < C2_OUT; i++) acc += w.fcw[base + i] * pooled[i];
      out[o] = acc;
    }
    return out;
  }
}

export function weightsUrl(name: string): URL {
  return new URL(`../weights/${name}.bin`, import.meta.url);
}

export function loadBackbone(name: string): Backbone {
  const spec = BACKBONES[name];
  if (!spec) {
    throw new Error(`unknown backbone "${name}"; available: ${Object.keys(BACKBONES).join(', ')}`);
  }
  return new Backbone(spec, readFileSync(weightsUrl(name)));
}
