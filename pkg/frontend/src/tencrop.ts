/**
 * Deterministic test-time ten-crop: TL, BL, TR, BR, center crops of size
 * s, then the horizontal mirror of each, stacked on a new leading axis.
 * Accepts H x W or C x H x W buffers.
 */

import { ValidationError } from './errors.js'

export interface ImageView {
  data: Float32Array
  shape: number[]
}

export interface CropSpec {
  ox: number
  oy: number
  s: number
  mirrored: boolean
}

export function tenCropSpecs(w: number, h: number, s: number): CropSpec[] {
  if (s > h || s > w) throw new ValidationError(`crop size ${s} exceeds image ${h} x ${w}`)
  const corners: Array<[number, number]> = [
    [0, 0],
    [0, h - s],
    [w - s, 0],
    [w - s, h - s],
    [Math.floor((w - s) / 2), Math.floor((h - s) / 2)],
  ]
  const specs: CropSpec[] = corners.map(([ox, oy]) => ({ ox, oy, s, mirrored: false }))
  return specs.concat(corners.map(([ox, oy]) => ({ ox, oy, s, mirrored: true })))
}

export function tenCrop(image: ImageView, s: number): ImageView {
  if (image.shape.length !== 2 && image.shape.length !== 3) {
    throw new ValidationError(`expected H x W or C x H x W, got shape ${image.shape}`)
  }
  const [c, h, w] =
    image.shape.length === 2 ? [1, image.shape[0], image.shape[1]] : (image.shape as [number, number, number])
  if (image.data.length !== c * h * w) {
    throw new ValidationError('image buffer length does not match its shape')
  }
  const specs = tenCropSpecs(w, h, s)
  const out = new Float32Array(10 * c * s * s)
  specs.forEach((spec, v) => {
    const base = v * c * s * s
    for (let ch = 0; ch < c; ch++) {
      for (let py = 0; py < s; py++) {
        for (let px = 0; px < s; px++) {
          const srcX = spec.mirrored ? spec.ox + (s - 1 - px) : spec.ox + px
          const srcY = spec.oy + py
          out[base + ch * s * s + py * s + px] = image.data[ch * h * w + srcY * w + srcX]
        }
      }
    }
  })
  const shape = image.shape.length === 2 ? [10, s, s] : [10, c, s, s]
  return { data: out, shape }
}
