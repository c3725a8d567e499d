/**
 * SplitMix64 random stream, bit-identical to the Python package.
 *
 * One uniform draw is `(next_u64() >> 11) * 2**-53`, a float64 in [0, 1).
 * Every operation documents how many draws it consumes and in what order,
 * so equal seeds give byte-identical outputs across both implementations.
 */

import { ValidationError } from './errors.js'

const MASK64 = (1n << 64n) - 1n
const GAMMA = 0x9e3779b97f4a7c15n
const MIX1 = 0xbf58476d1ce4e5b9n
const MIX2 = 0x94d049bb133111ebn
const DERIVE_SALT = 0xd1342543de82ef95n

/** Anything that yields uniform draws; tests substitute scripted sources. */
export interface UniformSource {
  uniform01(): number
}

export class RngStream implements UniformSource {
  readonly seed: bigint
  private state: bigint

  constructor(seed: bigint | number) {
    this.seed = BigInt(seed) & MASK64
    this.state = this.seed
  }

  nextU64(): bigint {
    this.state = (this.state + GAMMA) & MASK64
    let z = this.state
    z = ((z ^ (z >> 30n)) * MIX1) & MASK64
    z = ((z ^ (z >> 27n)) * MIX2) & MASK64
    return z ^ (z >> 31n)
  }

  /** One draw: float64 in [0, 1) with 53 significant bits. */
  uniform01(): number {
    return Number(this.nextU64() >> 11n) * 2 ** -53
  }

  /** Child stream keyed off the original seed; independent of consumption. */
  derive(key: number | bigint): RngStream {
    const mixer = new RngStream(((this.seed ^ DERIVE_SALT) + BigInt(key) * GAMMA) & MASK64)
    return new RngStream(mixer.nextU64())
  }
}

/** Uniform in [lo, hi); one draw. Degenerate lo == hi returns lo. */
export function sampleUniform(rng: UniformSource, lo: number, hi: number): number {
  if (lo > hi) throw new ValidationError(`invalid range: lo=${lo} > hi=${hi}`)
  return lo + (hi - lo) * rng.uniform01()
}

/** Beta(1, 1) is the uniform distribution; exactly sampleUniform(rng, 0, 1). */
export function sampleBeta11(rng: UniformSource): number {
  return sampleUniform(rng, 0.0, 1.0)
}

/** True with probability p; always consumes one draw. */
export function bernoulli(rng: UniformSource, p: number): boolean {
  if (!(p >= 0 && p <= 1)) throw new ValidationError(`invalid probability: ${p}`)
  return rng.uniform01() < p
}

/** Integer uniform on {0..m-1}; one draw even for m == 1. */
export function randBelow(rng: UniformSource, m: number): number {
  if (m < 1) throw new ValidationError(`randBelow needs m >= 1, got ${m}`)
  return Math.floor(rng.uniform01() * m)
}
