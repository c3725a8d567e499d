/**
 * Batch augmentation operators over raw float buffers.
 *
 * Inputs are contiguous Float32Array views (images N x C x H x W, labels
 * N x K). Internally everything widens to float64, applies the operator,
 * and rounds back to float32 once at the end, which is exactly the
 * arithmetic the Python package performs. Draw order per operator:
 *
 *   mixcut:  gate; then pairing (n-1), lambda?, eta?, center x, center y
 *   cutout:  center x, center y
 *   mixup:   pairing (n-1), lambda?
 *   cutmix:  gate; then pairing (n-1), eta?, center x, center y
 *
 * "lambda?"/"eta?" consume one draw under beta11 and none when fixed;
 * per-sample mode repeats the post-pairing scalars per sample.
 */

import { ValidationError } from './errors.js'
import { Policy, PolicyInput, resolvePolicy } from './policy.js'
import { RngStream, UniformSource, bernoulli, randBelow, sampleBeta11, sampleUniform } from './rng.js'

export interface ImageBuffer {
  data: Float32Array
  shape: [number, number, number, number]
}

export interface LabelBuffer {
  data: Float32Array
  shape: [number, number]
}

export interface Region {
  x1: number
  x2: number
  y1: number
  y2: number
}

export interface AppliedRecord {
  method: string
  applied: boolean
  lam: number | number[] | null
  eta: number | number[] | null
  region: number[] | number[][] | null
  permutation: number[] | null
  effective_ratio: number | number[] | null
  per_sample: boolean
}

export interface AugmentResult {
  images: ImageBuffer
  labels: LabelBuffer
  record: AppliedRecord
}

const ROW_SUM_TOL = 1e-6

export function applyPolicy(
  images: ImageBuffer,
  labels: LabelBuffer,
  policyInput: PolicyInput,
  seed: number | bigint
): AugmentResult {
  return applyPolicyWithRng(images, labels, policyInput, new RngStream(seed))
}

/** Same as applyPolicy but with a caller-supplied draw source (tests). */
export function applyPolicyWithRng(
  images: ImageBuffer,
  labels: LabelBuffer,
  policyInput: PolicyInput,
  rng: UniformSource
): AugmentResult {
  const policy = resolvePolicy(policyInput)
  validateBatch(images, labels)
  const img = Float64Array.from(images.data)
  const lab = Float64Array.from(labels.data)
  const state: OpState = { images, labels, img, lab, policy, rng }
  switch (policy.method) {
    case 'none':
      return finish(state, img, lab, emptyRecord('none'))
    case 'mixcut':
      return mixcut(state)
    case 'cutout':
      return cutout(state)
    case 'mixup':
      return mixup(state)
    case 'cutmix':
      return cutmix(state)
  }
}

interface OpState {
  images: ImageBuffer
  labels: LabelBuffer
  img: Float64Array
  lab: Float64Array
  policy: Policy
  rng: UniformSource
}

function emptyRecord(method: string): AppliedRecord {
  return {
    method,
    applied: false,
    lam: null,
    eta: null,
    region: null,
    permutation: null,
    effective_ratio: null,
    per_sample: false,
  }
}

function finish(state: OpState, img: Float64Array, lab: Float64Array, record: AppliedRecord): AugmentResult {
  return {
    images: { data: Float32Array.from(img), shape: [...state.images.shape] },
    labels: { data: Float32Array.from(lab), shape: [...state.labels.shape] },
    record,
  }
}

export function validateBatch(images: ImageBuffer, labels: LabelBuffer): void {
  const [n, c, h, w] = images.shape
  const [ln, k] = labels.shape
  if (n < 1 || c < 1 || h < 1 || w < 1) {
    throw new ValidationError(`image batch dims must all be >= 1, got ${images.shape}`)
  }
  if (images.data.length !== n * c * h * w) {
    throw new ValidationError('image buffer length does not match its shape')
  }
  if (ln < 1 || k < 1 || labels.data.length !== ln * k) {
    throw new ValidationError('label buffer length does not match its shape')
  }
  if (n !== ln) throw new ValidationError(`dimension mismatch: ${n} images vs ${ln} label rows`)
  for (const v of images.data) {
    if (!(v >= 0 && v <= 1)) throw new ValidationError('image batch values out of range [0, 1]')
  }
  for (let row = 0; row < ln; row++) {
    let sum = 0
    for (let j = 0; j < k; j++) {
      const v = labels.data[row * k + j]
      if (!(v >= 0 && v <= 1)) throw new ValidationError('label batch values out of range [0, 1]')
      sum += v
    }
    if (Math.abs(sum - 1) > ROW_SUM_TOL) {
      throw new ValidationError(`label row ${row} sums to ${sum}, expected 1 +/- ${ROW_SUM_TOL}`)
    }
  }
}

function fisherYates(n: number, rng: UniformSource): number[] {
  const perm = Array.from({ length: n }, (_, i) => i)
  for (let i = n - 1; i >= 1; i--) {
    const j = randBelow(rng, i + 1)
    const t = perm[i]
    perm[i] = perm[j]
    perm[j] = t
  }
  return perm
}

export function regionFromCenter(cx: number, cy: number, w: number, h: number, eta: number): Region {
  if (!(eta >= 0 && eta <= 1)) throw new ValidationError(`invalid removal ratio: eta=${eta}`)
  const side = Math.sqrt(1.0 - eta)
  const rw = w * side
  const rh = h * side
  return {
    x1: Math.floor(Math.max(cx - rw / 2.0, 0.0) + 0.5),
    x2: Math.floor(Math.min(cx + rw / 2.0, w) + 0.5),
    y1: Math.floor(Math.max(cy - rh / 2.0, 0.0) + 0.5),
    y2: Math.floor(Math.min(cy + rh / 2.0, h) + 0.5),
  }
}

function sampleRegion(rng: UniformSource, w: number, h: number, eta: number): Region {
  const cx = sampleUniform(rng, 0.0, w)
  const cy = sampleUniform(rng, 0.0, h)
  return regionFromCenter(cx, cy, w, h, eta)
}

function regionArea(r: Region): number {
  return (r.x2 - r.x1) * (r.y2 - r.y1)
}

function drawLam(policy: Policy, rng: UniformSource): number {
  return policy.lambdaFixed !== null ? policy.lambdaFixed : sampleBeta11(rng)
}

function drawEta(policy: Policy, rng: UniformSource): number {
  return policy.betaFixed !== null ? 1.0 - policy.betaFixed : sampleBeta11(rng)
}

function inRegion(r: Region, px: number, py: number): boolean {
  return r.x1 <= px && px < r.x2 && r.y1 <= py && py < r.y2
}

function mixcut(state: OpState): AugmentResult {
  const { img, lab, policy, rng } = state
  const [n, c, h, w] = state.images.shape
  const k = state.labels.shape[1]
  if (!bernoulli(rng, policy.gamma)) {
    return finish(state, img, lab, emptyRecord('mixcut'))
  }
  const perm = fisherYates(n, rng)
  const outImg = new Float64Array(img.length)
  const outLab = new Float64Array(lab.length)
  const plane = c * h * w

  const mixOne = (i: number, lam: number, region: Region) => {
    const om = 1.0 - lam
    const aBase = i * plane
    const bBase = perm[i] * plane
    for (let ch = 0; ch < c; ch++) {
      for (let py = 0; py < h; py++) {
        for (let px = 0; px < w; px++) {
          const off = ch * h * w + py * w + px
          const v = lam * img[aBase + off] + om * img[bBase + off]
          outImg[aBase + off] = v * (inRegion(region, px, py) ? 0.0 : 1.0)
        }
      }
    }
    for (let j = 0; j < k; j++) {
      outLab[i * k + j] = lam * lab[i * k + j] + om * lab[perm[i] * k + j]
    }
  }

  if (!policy.perSample) {
    const lam = drawLam(policy, rng)
    const eta = drawEta(policy, rng)
    const region = sampleRegion(rng, w, h, eta)
    for (let i = 0; i < n; i++) mixOne(i, lam, region)
    return finish(state, outImg, outLab, {
      method: 'mixcut',
      applied: true,
      lam,
      eta,
      region: [region.x1, region.x2, region.y1, region.y2],
      permutation: perm,
      effective_ratio: regionArea(region) / (w * h),
      per_sample: false,
    })
  }

  const lams: number[] = []
  const etas: number[] = []
  const regions: number[][] = []
  const ratios: number[] = []
  for (let i = 0; i < n; i++) {
    const lam = drawLam(policy, rng)
    const eta = drawEta(policy, rng)
    const region = sampleRegion(rng, w, h, eta)
    mixOne(i, lam, region)
    lams.push(lam)
    etas.push(eta)
    regions.push([region.x1, region.x2, region.y1, region.y2])
    ratios.push(regionArea(region) / (w * h))
  }
  return finish(state, outImg, outLab, {
    method: 'mixcut',
    applied: true,
    lam: lams,
    eta: etas,
    region: regions,
    permutation: perm,
    effective_ratio: ratios,
    per_sample: true,
  })
}

function cutout(state: OpState): AugmentResult {
  const { img, lab, policy, rng } = state
  const [n, c, h, w] = state.images.shape
  const eta = 1.0 - (policy.betaFixed as number)
  const outImg = new Float64Array(img.length)
  const plane = c * h * w

  const cutOne = (i: number, region: Region) => {
    const base = i * plane
    for (let ch = 0; ch < c; ch++) {
      for (let py = 0; py < h; py++) {
        for (let px = 0; px < w; px++) {
          const off = base + ch * h * w + py * w + px
          outImg[off] = img[off] * (inRegion(region, px, py) ? 0.0 : 1.0)
        }
      }
    }
  }

  if (!policy.perSample) {
    const region = sampleRegion(rng, w, h, eta)
    for (let i = 0; i < n; i++) cutOne(i, region)
    return finish(state, outImg, lab, {
      method: 'cutout',
      applied: true,
      lam: null,
      eta,
      region: [region.x1, region.x2, region.y1, region.y2],
      permutation: null,
      effective_ratio: regionArea(region) / (w * h),
      per_sample: false,
    })
  }
  const regions: number[][] = []
  const ratios: number[] = []
  for (let i = 0; i < n; i++) {
    const region = sampleRegion(rng, w, h, eta)
    cutOne(i, region)
    regions.push([region.x1, region.x2, region.y1, region.y2])
    ratios.push(regionArea(region) / (w * h))
  }
  return finish(state, outImg, lab, {
    method: 'cutout',
    applied: true,
    lam: null,
    eta,
    region: regions,
    permutation: null,
    effective_ratio: ratios,
    per_sample: true,
  })
}

function mixup(state: OpState): AugmentResult {
  const { img, lab, policy, rng } = state
  const [n, c, h, w] = state.images.shape
  const k = state.labels.shape[1]
  const perm = fisherYates(n, rng)
  const outImg = new Float64Array(img.length)
  const outLab = new Float64Array(lab.length)
  const plane = c * h * w

  const mixOne = (i: number, lam: number) => {
    const om = 1.0 - lam
    const aBase = i * plane
    const bBase = perm[i] * plane
    for (let off = 0; off < plane; off++) {
      outImg[aBase + off] = lam * img[aBase + off] + om * img[bBase + off]
    }
    for (let j = 0; j < k; j++) {
      outLab[i * k + j] = lam * lab[i * k + j] + om * lab[perm[i] * k + j]
    }
  }

  if (!policy.perSample) {
    const lam = drawLam(policy, rng)
    for (let i = 0; i < n; i++) mixOne(i, lam)
    return finish(state, outImg, outLab, {
      method: 'mixup',
      applied: true,
      lam,
      eta: null,
      region: null,
      permutation: perm,
      effective_ratio: null,
      per_sample: false,
    })
  }
  const lams: number[] = []
  for (let i = 0; i < n; i++) lams.push(drawLam(policy, rng))
  for (let i = 0; i < n; i++) mixOne(i, lams[i])
  return finish(state, outImg, outLab, {
    method: 'mixup',
    applied: true,
    lam: lams,
    eta: null,
    region: null,
    permutation: perm,
    effective_ratio: null,
    per_sample: true,
  })
}

function cutmix(state: OpState): AugmentResult {
  const { img, lab, policy, rng } = state
  const [n, c, h, w] = state.images.shape
  const k = state.labels.shape[1]
  if (!bernoulli(rng, policy.gamma)) {
    return finish(state, img, lab, emptyRecord('cutmix'))
  }
  const perm = fisherYates(n, rng)
  const outImg = Float64Array.from(img)
  const outLab = new Float64Array(lab.length)
  const plane = c * h * w

  const pasteOne = (i: number, region: Region): number => {
    const aBase = i * plane
    const bBase = perm[i] * plane
    for (let ch = 0; ch < c; ch++) {
      for (let py = region.y1; py < region.y2; py++) {
        for (let px = region.x1; px < region.x2; px++) {
          const off = ch * h * w + py * w + px
          outImg[aBase + off] = img[bBase + off]
        }
      }
    }
    const wB = regionArea(region) / (w * h)
    const wA = 1.0 - wB
    for (let j = 0; j < k; j++) {
      outLab[i * k + j] = wA * lab[i * k + j] + wB * lab[perm[i] * k + j]
    }
    return wB
  }

  if (!policy.perSample) {
    const eta = drawEta(policy, rng)
    const region = sampleRegion(rng, w, h, eta)
    let wB = 0
    for (let i = 0; i < n; i++) wB = pasteOne(i, region)
    return finish(state, outImg, outLab, {
      method: 'cutmix',
      applied: true,
      lam: null,
      eta,
      region: [region.x1, region.x2, region.y1, region.y2],
      permutation: perm,
      effective_ratio: wB,
      per_sample: false,
    })
  }
  const etas: number[] = []
  const regions: number[][] = []
  const ratios: number[] = []
  for (let i = 0; i < n; i++) {
    const eta = drawEta(policy, rng)
    const region = sampleRegion(rng, w, h, eta)
    const wB = pasteOne(i, region)
    etas.push(eta)
    regions.push([region.x1, region.x2, region.y1, region.y2])
    ratios.push(wB)
  }
  return finish(state, outImg, outLab, {
    method: 'cutmix',
    applied: true,
    lam: null,
    eta: etas,
    region: regions,
    permutation: perm,
    effective_ratio: ratios,
    per_sample: true,
  })
}
