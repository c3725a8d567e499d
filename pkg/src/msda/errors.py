"""Exception types shared across the package.

Two families matter to callers: contract violations (bad shapes, values
outside their domain, invalid policies) and file-format problems (corrupt
or malformed inputs). The CLI maps them to distinct exit codes.
"""


class ValidationError(ValueError):
    """An argument or batch violates a documented invariant."""


class DataFormatError(ValueError):
    """A file could not be parsed (bad magic, malformed row, wrong count)."""
