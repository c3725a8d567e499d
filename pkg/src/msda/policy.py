"""Augmentation policies and their flat text format.

A policy picks one method and its hyperparameters:

    method      mixcut | cutout | mixup | cutmix | none
    lambda      interpolation strength: "beta11" (drawn per batch) or a
                fixed float in [0, 1]
    beta        removal area ratio: "beta11" (beta = 1 - eta with eta
                drawn per batch) or a fixed float in [0, 1]
    gamma       probability the method is applied at all, in [0, 1]
    per_sample  draw scalars per sample instead of per batch (optional,
                default false; the per-batch default is the reference
                behaviour)

The text format is whitespace-separated key=value pairs, e.g.

    method=mixcut lambda=beta11 beta=beta11 gamma=0.5

Cutout and mixup are always-on methods: their gamma must be 1, and
cutout requires a fixed beta (default 0.25) because its removal area
never varies. Missing keys take the method's defaults.
"""

from dataclasses import dataclass

from .errors import ValidationError

METHODS = ("mixcut", "cutout", "mixup", "cutmix", "none")

# Per-method defaults: (lambda_fixed, beta_fixed, gamma); None means "drawn".
_DEFAULTS = {
    "mixcut": (None, None, 0.5),
    "cutout": (None, 0.25, 1.0),
    "mixup": (None, None, 1.0),
    "cutmix": (None, None, 0.5),
    "none": (None, None, 0.0),
}


@dataclass(frozen=True)
class AugmentPolicy:
    """Method selector plus hyperparameters.

    ``lambda_fixed`` / ``beta_fixed`` of None mean the value is drawn
    from Beta(1, 1) at application time.
    """

    method: str
    lambda_fixed: float | None = None
    beta_fixed: float | None = None
    gamma: float = 0.5
    per_sample: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"unknown method: {self.method!r}")
        for name, v in (("lambda", self.lambda_fixed), ("beta", self.beta_fixed)):
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValidationError(f"fixed {name} must be in [0, 1], got {v}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValidationError(f"invalid probability: gamma={self.gamma}")
        if self.method in ("cutout", "mixup") and self.gamma != 1.0:
            raise ValidationError(f"{self.method} is always applied; gamma must be 1")
        if self.method == "cutout" and self.beta_fixed is None:
            raise ValidationError("cutout requires a fixed beta (removal ratio)")


def default_policy(method: str) -> AugmentPolicy:
    """The reference policy for a method."""
    if method not in _DEFAULTS:
        raise ValidationError(f"unknown method: {method!r}")
    lam, beta, gamma = _DEFAULTS[method]
    return AugmentPolicy(method=method, lambda_fixed=lam, beta_fixed=beta, gamma=gamma)


def parse_policy(text: str) -> AugmentPolicy:
    """Parse the key=value text format into a policy.

    Accepts newline- or space-separated pairs. Unknown keys are errors;
    missing keys fall back to the method's defaults.
    """
    pairs = {}
    for token in text.split():
        if "=" not in token:
            raise ValidationError(f"malformed policy token: {token!r}")
        key, value = token.split("=", 1)
        if key in pairs:
            raise ValidationError(f"duplicate policy key: {key!r}")
        pairs[key] = value

    if "method" not in pairs:
        raise ValidationError("policy is missing the method key")
    method = pairs.pop("method")
    if method not in _DEFAULTS:
        raise ValidationError(f"unknown method: {method!r}")
    lam_d, beta_d, gamma_d = _DEFAULTS[method]

    lam = _parse_spec(pairs.pop("lambda", None), lam_d, "lambda")
    beta = _parse_spec(pairs.pop("beta", None), beta_d, "beta")
    gamma = _parse_float(pairs.pop("gamma", None), gamma_d, "gamma")
    per_sample = _parse_bool(pairs.pop("per_sample", None), False)
    if pairs:
        raise ValidationError(f"unknown policy keys: {sorted(pairs)}")
    return AugmentPolicy(
        method=method, lambda_fixed=lam, beta_fixed=beta, gamma=gamma, per_sample=per_sample
    )


def format_policy(policy: AugmentPolicy) -> str:
    """Render a policy in the canonical one-line text form."""
    lam = "beta11" if policy.lambda_fixed is None else repr(policy.lambda_fixed)
    beta = "beta11" if policy.beta_fixed is None else repr(policy.beta_fixed)
    line = f"method={policy.method} lambda={lam} beta={beta} gamma={policy.gamma!r}"
    if policy.per_sample:
        line += " per_sample=true"
    return line


def _parse_spec(raw, default, name):
    if raw is None:
        return default
    if raw == "beta11":
        return None
    return _parse_float(raw, None, name)


def _parse_float(raw, default, name):
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"policy key {name} has non-numeric value {raw!r}") from None


def _parse_bool(raw, default):
    if raw is None:
        return default
    if raw in ("true", "1", "yes"):
        return True
    if raw in ("false", "0", "no"):
        return False
    raise ValidationError(f"policy key per_sample must be true or false, got {raw!r}")
