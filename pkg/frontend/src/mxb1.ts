/**
 * MXB1 tensor bytes, little-endian throughout:
 * magic "MXB1", u32 rank, rank * u32 dims, then row-major f32 data.
 */

import { DataFormatError } from './errors.js'

const MAGIC = [0x4d, 0x58, 0x42, 0x31] // "MXB1"
const MAX_RANK = 32

export interface Tensor {
  dims: number[]
  data: Float32Array
}

export function encodeMxb1(dims: number[], data: Float32Array): Uint8Array {
  const count = dims.reduce((a, b) => a * b, 1)
  if (count !== data.length) {
    throw new DataFormatError(`dims ${JSON.stringify(dims)} need ${count} values, got ${data.length}`)
  }
  const out = new Uint8Array(8 + 4 * dims.length + 4 * count)
  const view = new DataView(out.buffer)
  MAGIC.forEach((b, i) => (out[i] = b))
  view.setUint32(4, dims.length, true)
  dims.forEach((d, i) => view.setUint32(8 + 4 * i, d, true))
  const base = 8 + 4 * dims.length
  for (let i = 0; i < count; i++) view.setFloat32(base + 4 * i, data[i], true)
  return out
}

export function decodeMxb1(bytes: Uint8Array, name = '<bytes>'): Tensor {
  if (bytes.length < 8) throw new DataFormatError(`${name}: truncated MXB1 header`)
  if (!MAGIC.every((b, i) => bytes[i] === b)) {
    throw new DataFormatError(`${name}: bad magic, expected "MXB1"`)
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength)
  const rank = view.getUint32(4, true)
  if (rank > MAX_RANK) throw new DataFormatError(`${name}: rank ${rank} exceeds limit ${MAX_RANK}`)
  const need = 8 + 4 * rank
  if (bytes.length < need) throw new DataFormatError(`${name}: truncated MXB1 dims`)
  const dims: number[] = []
  for (let i = 0; i < rank; i++) dims.push(view.getUint32(8 + 4 * i, true))
  const count = dims.reduce((a, b) => a * b, 1)
  if (bytes.length !== need + 4 * count) {
    throw new DataFormatError(
      `${name}: data section is ${bytes.length - need} bytes, expected ${4 * count}`
    )
  }
  const data = new Float32Array(count)
  for (let i = 0; i < count; i++) data[i] = view.getFloat32(need + 4 * i, true)
  return { dims, data }
}
