/*
NPY 1.0 with a narrow profile: little-endian C-order float32 matrices for
features and int64 vectors for labels. The header layout (including the
64-byte alignment padding) matches what the consuming Python side writes,
so files from either producer are diffable byte for byte.
*/

const MAGIC = Buffer.from('\x93NUMPY', 'latin1');

function header(descr: string, shape: number[]): Buffer {
  const dims = shape.length === 1 ? `(${shape[0]},)` : `(${shape.join(', ')})`;
  const body = `{'descr': '${descr}', 'fortran_order': False, 'shape': ${dims}, }`;
  const unpadded = MAGIC.length + 2 + 2 + body.length + 1;
  const pad = (64 - (unpadded % 64)) % 64;
  const text = body + ' '.repeat(pad) + '\n';
  const out = Buffer.alloc(MAGIC.length + 2 + 2 + text.length);
  MAGIC.copy(out, 0);
  out[6] = 1; // format version 1.0
  out[7] = 0;
  out.writeUInt16LE(text.length, 8);
  out.write(text, 10, 'latin1');
  return out;
}

export function encodeFloat32Matrix(rows: number, cols: number, data: Float32Array): Buffer {
  if (data.length !== rows * cols) {
    throw new Error(`expected ${rows * cols} values, got ${data.length}`);
  }
  const head = header('<f4', [rows, cols]);
  const body = Buffer.alloc(data.length * 4);
  for (let i = 0; i < data.length; i++) body.writeFloatLE(data[i], i * 4);
  return Buffer.concat([head, body]);
}

export function encodeInt64Vector(values: bigint[]): Buffer {
  const head = header('<i8', [values.length]);
  const body = Buffer.alloc(values.length * 8);
  for (let i = 0; i < values.length; i++) body.writeBigInt64LE(values[i], i * 8);
  return Buffer.concat([head, body]);
}

export interface DecodedNpy {
  descr: string;
  shape: number[];
  data: Float32Array | Float64Array | BigInt64Array;
}

/* Reader for tests and spot checks; rejects anything outside the profile. */
export function decodeNpy(buf: Buffer): DecodedNpy {
  if (!buf.subarray(0, 6).equals(MAGIC)) throw new Error('bad NPY magic');
  if (buf[6] !== 1 || buf[7] !== 0) throw new Error(`unsupported NPY version ${buf[6]}.${buf[7]}`);
  const hlen = buf.readUInt16LE(8);
  const text = buf.subarray(10, 10 + hlen).toString('latin1');
  const descr = /'descr':\s*'([^']+)'/.exec(text)?.[1];
  const fortran = /'fortran_order':\s*(True|False)/.exec(text)?.[1];
  const dims = /'shape':\s*\(([^)]*)\)/.exec(text)?.[1];
  if (!descr || !fortran || dims === undefined) throw new Error('unparseable NPY header');
  if (fortran === 'True') throw new Error('fortran-order arrays are not supported');
  const shape = dims.split(',').map(s => s.trim()).filter(s => s !== '').map(Number);
  const count = shape.reduce((a, b) => a * b, 1);
  const payload = buf.subarray(10 + hlen);
  const aligned = new ArrayBuffer(payload.length); // typed arrays need 0 offset
  new Uint8Array(aligned).set(payload);
  if (descr === '<f4') {
    if (payload.length !== count * 4) throw new Error('truncated float32 payload');
    return { descr, shape, data: new Float32Array(aligned) };
  }
  if (descr === '<f8') {
    if (payload.length !== count * 8) throw new Error('truncated float64 payload');
    return { descr, shape, data: new Float64Array(aligned) };
  }
  if (descr === '<i8') {
    if (payload.length !== count * 8) throw new Error('truncated int64 payload');
    return { descr, shape, data: new BigInt64Array(aligned) };
  }
  throw new Error(`unsupported dtype descr ${descr}`);
}
