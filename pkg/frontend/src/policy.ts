/**
 * Augmentation policies as flat mappings mirroring the text format:
 * { method, lambda?, beta?, gamma?, per_sample? }. "beta11" (or omission)
 * means the value is drawn from Beta(1,1) at application time; a number
 * (or numeric string) fixes it. Defaults per method match the reference
 * implementation: mixcut/cutmix gate at 0.5; cutout fixes beta = 0.25;
 * cutout and mixup are always-on (gamma must be 1).
 */

import { ValidationError } from './errors.js'

export type Method = 'mixcut' | 'cutout' | 'mixup' | 'cutmix' | 'none'

export interface PolicyInput {
  method: string
  lambda?: string | number
  beta?: string | number
  gamma?: string | number
  per_sample?: string | boolean
}

export interface Policy {
  method: Method
  lambdaFixed: number | null
  betaFixed: number | null
  gamma: number
  perSample: boolean
}

const DEFAULTS: Record<Method, [number | null, number | null, number]> = {
  mixcut: [null, null, 0.5],
  cutout: [null, 0.25, 1.0],
  mixup: [null, null, 1.0],
  cutmix: [null, null, 0.5],
  none: [null, null, 0.0],
}

export function resolvePolicy(input: PolicyInput): Policy {
  const method = input.method as Method
  if (!(method in DEFAULTS)) throw new ValidationError(`unknown method: ${input.method}`)
  const [lamDefault, betaDefault, gammaDefault] = DEFAULTS[method]
  const lambdaFixed = parseSpec(input.lambda, lamDefault, 'lambda')
  const betaFixed = parseSpec(input.beta, betaDefault, 'beta')
  const gamma = input.gamma === undefined ? gammaDefault : parseNumber(input.gamma, 'gamma')
  const perSample = parseBool(input.per_sample)

  for (const [name, v] of [['lambda', lambdaFixed], ['beta', betaFixed]] as const) {
    if (v !== null && !(v >= 0 && v <= 1)) {
      throw new ValidationError(`fixed ${name} must be in [0, 1], got ${v}`)
    }
  }
  if (!(gamma >= 0 && gamma <= 1)) throw new ValidationError(`invalid probability: gamma=${gamma}`)
  if ((method === 'cutout' || method === 'mixup') && gamma !== 1.0) {
    throw new ValidationError(`${method} is always applied; gamma must be 1`)
  }
  if (method === 'cutout' && betaFixed === null) {
    throw new ValidationError('cutout requires a fixed beta (removal ratio)')
  }
  return { method, lambdaFixed, betaFixed, gamma, perSample }
}

function parseSpec(raw: string | number | undefined, fallback: number | null, name: string): number | null {
  if (raw === undefined) return fallback
  if (raw === 'beta11') return null
  return parseNumber(raw, name)
}

function parseNumber(raw: string | number, name: string): number {
  const v = typeof raw === 'number' ? raw : Number(raw)
  if (!Number.isFinite(v)) throw new ValidationError(`policy key ${name} has non-numeric value ${raw}`)
  return v
}

function parseBool(raw: string | boolean | undefined): boolean {
  if (raw === undefined) return false
  if (typeof raw === 'boolean') return raw
  if (raw === 'true' || raw === '1' || raw === 'yes') return true
  if (raw === 'false' || raw === '0' || raw === 'no') return false
  throw new ValidationError(`per_sample must be true or false, got ${raw}`)
}
