"""Batch-level augmentation operators: mixcut, cutout, mixup, cutmix.

All four share the same building blocks: a batch pairing permutation, a
convex pixel/label mix, and a rasterized square removal region. Each
operator documents the draws it consumes, in order, so a seeded stream
reproduces any run bit-exactly:

    mixcut:  gate; then permutation (n-1), lambda?, eta?, center x, center y
    cutout:  center x, center y                     (always applied)
    mixup:   permutation (n-1), lambda?             (always applied)
    cutmix:  gate; then permutation (n-1), eta?, center x, center y

"lambda?" / "eta?" consume one draw when the policy says beta11 and none
when the value is fixed. With ``per_sample=True`` the scalar draws after
the permutation repeat per sample, in sample order, same order within
each sample.

Arithmetic contract (shared with any reimplementation): all math is
float64; a mixed pixel is ``fl(fl(lam*a) + fl(om*b))`` with
``om = fl(1 - lam)`` computed once, and masking multiplies afterwards.
"""

from dataclasses import dataclass

import numpy as np

from .batches import ImageBatch, LabelBatch, validate_batch
from .errors import ValidationError
from .geometry import (
    CutRegion,
    effective_area_ratio,
    region_to_mask,
    sample_cut_region,
)
from .policy import AugmentPolicy
from .rng import bernoulli, rand_below, sample_beta11


@dataclass(frozen=True)
class PairedBatch:
    """Pairing of sample i (A side) with sample index_map[i] (B side)."""

    index_map: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.index_map) != list(range(len(self.index_map))):
            raise ValidationError("index_map is not a permutation")


@dataclass
class AppliedRecord:
    """Audit record of one operator invocation.

    ``lam``, ``eta``, ``region`` and ``effective_ratio`` are scalars in
    per-batch mode and tuples (one entry per sample) in per-sample mode;
    fields a method does not use stay None.
    """

    method: str
    applied: bool
    lam: object = None
    eta: object = None
    region: object = None
    permutation: tuple[int, ...] | None = None
    effective_ratio: object = None
    per_sample: bool = False

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, CutRegion):
                return list(v.bounds())
            if isinstance(v, tuple):
                return [enc(x) for x in v]
            return v

        return {
            "method": self.method,
            "applied": self.applied,
            "lam": enc(self.lam),
            "eta": enc(self.eta),
            "region": enc(self.region),
            "permutation": list(self.permutation) if self.permutation is not None else None,
            "effective_ratio": enc(self.effective_ratio),
            "per_sample": self.per_sample,
        }


def shuffle_pair(n: int, rng) -> PairedBatch:
    """Uniform random pairing permutation via Fisher-Yates, n-1 draws.

    Walks i from n-1 down to 1 and swaps position i with
    ``rand_below(i + 1)``. n == 1 consumes nothing and is the identity.
    """
    if n < 1:
        raise ValidationError(f"empty batch: n={n}")
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rand_below(rng, i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return PairedBatch(index_map=tuple(perm))


def mix_images(a: ImageBatch, b: ImageBatch, lam: float) -> ImageBatch:
    """Convex pixel mix lam * a + (1 - lam) * b."""
    if a.data.shape != b.data.shape:
        raise ValidationError(f"shape mismatch: {a.data.shape} vs {b.data.shape}")
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"lambda must be in [0, 1], got {lam}")
    om = 1.0 - lam
    return ImageBatch(lam * a.data + om * b.data)


def mix_labels(ya: LabelBatch, yb: LabelBatch, lam: float) -> LabelBatch:
    """Convex label mix lam * ya + (1 - lam) * yb; rows stay on the simplex."""
    if ya.data.shape != yb.data.shape:
        raise ValidationError(f"shape mismatch: {ya.data.shape} vs {yb.data.shape}")
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"lambda must be in [0, 1], got {lam}")
    om = 1.0 - lam
    return LabelBatch(lam * ya.data + om * yb.data)


def apply_mask(images: ImageBatch, mask: np.ndarray) -> ImageBatch:
    """Multiply every sample and channel by an H x W {0, 1} mask."""
    if mask.shape != (images.h, images.w):
        raise ValidationError(
            f"mask shape {mask.shape} does not match image {images.h} x {images.w}"
        )
    return ImageBatch(images.data * mask[None, None, :, :])


def _gather(images: ImageBatch, labels: LabelBatch, pair: PairedBatch):
    idx = np.asarray(pair.index_map, dtype=np.intp)
    return images.data[idx], labels.data[idx]


def _draw_lam(policy: AugmentPolicy, rng) -> float:
    return policy.lambda_fixed if policy.lambda_fixed is not None else sample_beta11(rng)


def _draw_eta(policy: AugmentPolicy, rng) -> float:
    if policy.beta_fixed is not None:
        return 1.0 - policy.beta_fixed
    return sample_beta11(rng)


def mixcut_batch(images, labels, policy, rng):
    """Mix two batch views at strength lambda, then erase a square region.

    Per-batch mode shares one permutation, one lambda and one region
    across the minibatch. Labels mix with lambda only; the region never
    touches them. Returns (images, labels, AppliedRecord).
    """
    validate_batch(images, labels)
    _require_method(policy, "mixcut")
    if not bernoulli(rng, policy.gamma):
        return images, labels, AppliedRecord(method="mixcut", applied=False)

    pair = shuffle_pair(images.n, rng)
    b_img, b_lab = _gather(images, labels, pair)

    if not policy.per_sample:
        lam = _draw_lam(policy, rng)
        eta = _draw_eta(policy, rng)
        region = sample_cut_region(rng, images.w, images.h, eta)
        om = 1.0 - lam
        mixed = lam * images.data + om * b_img
        out_img = mixed * region_to_mask(region)[None, None, :, :]
        out_lab = lam * labels.data + om * b_lab
        record = AppliedRecord(
            method="mixcut",
            applied=True,
            lam=lam,
            eta=eta,
            region=region,
            permutation=pair.index_map,
            effective_ratio=effective_area_ratio(region),
        )
        return ImageBatch(out_img), LabelBatch(out_lab), record

    lams, etas, regions = [], [], []
    out_img = np.empty_like(images.data)
    out_lab = np.empty_like(labels.data)
    for i in range(images.n):
        lam = _draw_lam(policy, rng)
        eta = _draw_eta(policy, rng)
        region = sample_cut_region(rng, images.w, images.h, eta)
        om = 1.0 - lam
        out_img[i] = (lam * images.data[i] + om * b_img[i]) * region_to_mask(region)[None, :, :]
        out_lab[i] = lam * labels.data[i] + om * b_lab[i]
        lams.append(lam)
        etas.append(eta)
        regions.append(region)
    record = AppliedRecord(
        method="mixcut",
        applied=True,
        lam=tuple(lams),
        eta=tuple(etas),
        region=tuple(regions),
        permutation=pair.index_map,
        effective_ratio=tuple(effective_area_ratio(r) for r in regions),
        per_sample=True,
    )
    return ImageBatch(out_img), LabelBatch(out_lab), record


def cutout_batch(images, labels, policy, rng):
    """Erase a fixed-ratio square at a random center; labels pass through.

    Always applied. The square is clipped at borders, so the actual
    erased area can undershoot the configured ratio.
    """
    validate_batch(images, labels)
    _require_method(policy, "cutout")
    eta = 1.0 - policy.beta_fixed

    if not policy.per_sample:
        region = sample_cut_region(rng, images.w, images.h, eta)
        out = images.data * region_to_mask(region)[None, None, :, :]
        record = AppliedRecord(
            method="cutout",
            applied=True,
            eta=eta,
            region=region,
            effective_ratio=effective_area_ratio(region),
        )
        return ImageBatch(out), labels, record

    regions = []
    out = np.empty_like(images.data)
    for i in range(images.n):
        region = sample_cut_region(rng, images.w, images.h, eta)
        out[i] = images.data[i] * region_to_mask(region)[None, :, :]
        regions.append(region)
    record = AppliedRecord(
        method="cutout",
        applied=True,
        eta=eta,
        region=tuple(regions),
        effective_ratio=tuple(effective_area_ratio(r) for r in regions),
        per_sample=True,
    )
    return ImageBatch(out), labels, record


def mixup_batch(images, labels, policy, rng):
    """Convex mix of the batch with a shuffled view of itself; no mask."""
    validate_batch(images, labels)
    _require_method(policy, "mixup")
    pair = shuffle_pair(images.n, rng)
    b_img, b_lab = _gather(images, labels, pair)

    if not policy.per_sample:
        lam = _draw_lam(policy, rng)
        om = 1.0 - lam
        out_img = lam * images.data + om * b_img
        out_lab = lam * labels.data + om * b_lab
        record = AppliedRecord(
            method="mixup", applied=True, lam=lam, permutation=pair.index_map
        )
        return ImageBatch(out_img), LabelBatch(out_lab), record

    lams = [_draw_lam(policy, rng) for _ in range(images.n)]
    lam_col = np.asarray(lams, dtype=np.float64)
    om_col = 1.0 - lam_col
    out_img = lam_col[:, None, None, None] * images.data + om_col[:, None, None, None] * b_img
    out_lab = lam_col[:, None] * labels.data + om_col[:, None] * b_lab
    record = AppliedRecord(
        method="mixup",
        applied=True,
        lam=tuple(lams),
        permutation=pair.index_map,
        per_sample=True,
    )
    return ImageBatch(out_img), LabelBatch(out_lab), record


def cutmix_batch(images, labels, policy, rng):
    """Paste a square region of the paired sample over each sample.

    Inside the region every pixel comes from the B side, outside from
    the A side; nothing is blended. The label weight on B is the actual
    (clipped) area fraction of the region, its complement goes to A.
    """
    validate_batch(images, labels)
    _require_method(policy, "cutmix")
    if not bernoulli(rng, policy.gamma):
        return images, labels, AppliedRecord(method="cutmix", applied=False)

    pair = shuffle_pair(images.n, rng)
    b_img, b_lab = _gather(images, labels, pair)

    if not policy.per_sample:
        eta = _draw_eta(policy, rng)
        region = sample_cut_region(rng, images.w, images.h, eta)
        x1, x2, y1, y2 = region.bounds()
        out_img = images.data.copy()
        out_img[:, :, y1:y2, x1:x2] = b_img[:, :, y1:y2, x1:x2]
        w_b = effective_area_ratio(region)
        w_a = 1.0 - w_b
        out_lab = w_a * labels.data + w_b * b_lab
        record = AppliedRecord(
            method="cutmix",
            applied=True,
            eta=eta,
            region=region,
            permutation=pair.index_map,
            effective_ratio=w_b,
        )
        return ImageBatch(out_img), LabelBatch(out_lab), record

    etas, regions, ratios = [], [], []
    out_img = images.data.copy()
    out_lab = np.empty_like(labels.data)
    for i in range(images.n):
        eta = _draw_eta(policy, rng)
        region = sample_cut_region(rng, images.w, images.h, eta)
        x1, x2, y1, y2 = region.bounds()
        out_img[i, :, y1:y2, x1:x2] = b_img[i, :, y1:y2, x1:x2]
        w_b = effective_area_ratio(region)
        w_a = 1.0 - w_b
        out_lab[i] = w_a * labels.data[i] + w_b * b_lab[i]
        etas.append(eta)
        regions.append(region)
        ratios.append(w_b)
    record = AppliedRecord(
        method="cutmix",
        applied=True,
        eta=tuple(etas),
        region=tuple(regions),
        permutation=pair.index_map,
        effective_ratio=tuple(ratios),
        per_sample=True,
    )
    return ImageBatch(out_img), LabelBatch(out_lab), record


_DISPATCH = {
    "mixcut": mixcut_batch,
    "cutout": cutout_batch,
    "mixup": mixup_batch,
    "cutmix": cutmix_batch,
}


def apply_policy(images, labels, policy, rng):
    """Dispatch a batch through the policy's method.

    method "none" validates and returns the inputs untouched with a
    not-applied record. Returns (ImageBatch, LabelBatch, AppliedRecord).
    """
    if not isinstance(policy, AugmentPolicy):
        raise ValidationError("apply_policy expects an AugmentPolicy")
    if policy.method == "none":
        validate_batch(images, labels)
        return images, labels, AppliedRecord(method="none", applied=False)
    return _DISPATCH[policy.method](images, labels, policy, rng)


def _require_method(policy: AugmentPolicy, method: str):
    if policy.method != method:
        raise ValidationError(f"policy method is {policy.method!r}, expected {method!r}")
