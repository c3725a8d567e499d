/**
 * Mixed-sample data augmentation over raw Float32Array buffers.
 *
 * The package surface is four operations: apply_policy, ten_crop,
 * read_mxb1, write_mxb1. Given equal seeds and policies they are
 * byte-identical to the msda Python package: same SplitMix64 stream,
 * same draw order, same float64 arithmetic, same float32 rounding.
 */

import { readFileSync, writeFileSync } from 'node:fs'

import { applyPolicy, AugmentResult, ImageBuffer, LabelBuffer } from './augment.js'
import { decodeMxb1, encodeMxb1, Tensor } from './mxb1.js'
import { PolicyInput } from './policy.js'
import { tenCrop, ImageView } from './tencrop.js'

export { DataFormatError, ValidationError } from './errors.js'
export { RngStream } from './rng.js'
export type { AppliedRecord, AugmentResult, ImageBuffer, LabelBuffer, Region } from './augment.js'
export type { PolicyInput } from './policy.js'
export type { Tensor } from './mxb1.js'
export type { CropSpec, ImageView } from './tencrop.js'
export { decodeMxb1, encodeMxb1 } from './mxb1.js'

/** Augment one batch; a fresh stream is built from the seed per call. */
export function apply_policy(
  images: ImageBuffer,
  labels: LabelBuffer,
  policy: PolicyInput,
  seed: number | bigint
): AugmentResult {
  return applyPolicy(images, labels, policy, seed)
}

/** Ten deterministic views of one image (corners, center, mirrors). */
export function ten_crop(image: ImageView, s: number): ImageView {
  return tenCrop(image, s)
}

/** Read an MXB1 tensor file. */
export function read_mxb1(path: string): Tensor {
  return decodeMxb1(new Uint8Array(readFileSync(path)), path)
}

/** Write an MXB1 tensor file (little-endian f32). */
export function write_mxb1(path: string, tensor: Tensor): void {
  writeFileSync(path, encodeMxb1(tensor.dims, tensor.data))
}
