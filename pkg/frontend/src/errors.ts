/** Contract violations: bad shapes, values outside their domain, bad policies. */
export class ValidationError extends Error {
  constructor(message: string) {
    super(message)
    this.name = 'ValidationError'
  }
}

/** Malformed MXB1 bytes: bad magic, absurd rank, truncated data. */
export class DataFormatError extends Error {
  constructor(message: string) {
    super(message)
    this.name = 'DataFormatError'
  }
}
