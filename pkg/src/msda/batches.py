"""Batch containers: pixel tensors and soft-label matrices.

Pixels live in [0, 1] as float64; a value of exactly 0 is an erased
(black) pixel. Labels are row-stochastic matrices: every row is a
probability vector summing to 1 within ROW_SUM_TOL, which absorbs the
accumulation error of repeated convex mixing.

Both containers freeze their arrays after construction and are safe to
share across threads for reading.
"""

import numpy as np

from .errors import ValidationError

ROW_SUM_TOL = 1e-6


class ImageBatch:
    """N x C x H x W pixel tensor with every value in [0, 1].

    Takes ownership of the given array (it is coerced to contiguous
    float64 and marked read-only).
    """

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.ascontiguousarray(data, dtype=np.float64)
        if arr.ndim != 4:
            raise ValidationError(f"image batch must be N x C x H x W, got shape {arr.shape}")
        if min(arr.shape) < 1:
            raise ValidationError(f"image batch dims must all be >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("image batch contains non-finite values")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValidationError("image batch values out of range [0, 1]")
        arr.setflags(write=False)
        self.data = arr

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def c(self) -> int:
        return self.data.shape[1]

    @property
    def h(self) -> int:
        return self.data.shape[2]

    @property
    def w(self) -> int:
        return self.data.shape[3]

    def __repr__(self):
        return f"ImageBatch(n={self.n}, c={self.c}, h={self.h}, w={self.w})"


class LabelBatch:
    """N x K soft-label matrix; each row sums to 1 within ROW_SUM_TOL."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.ascontiguousarray(data, dtype=np.float64)
        if arr.ndim != 2:
            raise ValidationError(f"label batch must be N x K, got shape {arr.shape}")
        if min(arr.shape) < 1:
            raise ValidationError(f"label batch dims must all be >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("label batch contains non-finite values")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValidationError("label batch values out of range [0, 1]")
        sums = arr.sum(axis=1)
        bad = np.abs(sums - 1.0) > ROW_SUM_TOL
        if bad.any():
            i = int(np.argmax(bad))
            raise ValidationError(f"label row {i} sums to {sums[i]!r}, expected 1 +/- {ROW_SUM_TOL}")
        arr.setflags(write=False)
        self.data = arr

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def k(self) -> int:
        return self.data.shape[1]

    def __repr__(self):
        return f"LabelBatch(n={self.n}, k={self.k})"


def validate_batch(images: ImageBatch, labels: LabelBatch) -> None:
    """Check that images and labels form a consistent batch.

    Re-verifies both containers' value invariants and that their sample
    counts agree. Raises ValidationError on the first violation; returns
    None when everything holds.
    """
    if not isinstance(images, ImageBatch) or not isinstance(labels, LabelBatch):
        raise ValidationError("validate_batch expects (ImageBatch, LabelBatch)")
    if images.n != labels.n:
        raise ValidationError(f"dimension mismatch: {images.n} images vs {labels.n} label rows")
    img = images.data
    if img.min() < 0.0 or img.max() > 1.0:
        raise ValidationError("image batch values out of range [0, 1]")
    lab = labels.data
    if lab.min() < 0.0 or lab.max() > 1.0:
        raise ValidationError("label batch values out of range [0, 1]")
    sums = lab.sum(axis=1)
    if np.abs(sums - 1.0).max() > ROW_SUM_TOL:
        i = int(np.argmax(np.abs(sums - 1.0)))
        raise ValidationError(f"label row {i} sums to {sums[i]!r}, expected 1 +/- {ROW_SUM_TOL}")
