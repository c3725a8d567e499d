"""Square removal regions and their binary masks.

Coordinates: x indexes columns (width axis), y indexes rows (height
axis). Regions are half-open integer rectangles [x1, x2) x [y1, y2)
inside a w x h image, which keeps area arithmetic exact.

A region with intended removal ratio ``1 - eta`` has side lengths
``w * sqrt(1 - eta)`` and ``h * sqrt(1 - eta)`` centered on a sampled
point. Bounds are clipped to the image first and then rounded, so a
center near a border yields a smaller actual region than intended.
Rounding is half-away-from-zero, which on the non-negative values
produced after clipping is ``floor(v + 0.5)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .rng import sample_uniform


@dataclass(frozen=True)
class CutRegion:
    """Half-open pixel rectangle [x1, x2) x [y1, y2) in a w_img x h_img image."""

    x1: int
    x2: int
    y1: int
    y2: int
    w_img: int
    h_img: int

    def __post_init__(self):
        if not (0 <= self.x1 <= self.x2 <= self.w_img):
            raise ValidationError(f"bad x bounds: {self.x1}..{self.x2} in width {self.w_img}")
        if not (0 <= self.y1 <= self.y2 <= self.h_img):
            raise ValidationError(f"bad y bounds: {self.y1}..{self.y2} in height {self.h_img}")

    @property
    def area(self) -> int:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def is_empty(self) -> bool:
        return self.area == 0

    def bounds(self) -> tuple[int, int, int, int]:
        return (self.x1, self.x2, self.y1, self.y2)


def _round_half_away(v: float) -> int:
    # Only called on clipped, hence non-negative, values.
    return int(math.floor(v + 0.5))


def region_from_center(cx: float, cy: float, w: int, h: int, eta: float) -> CutRegion:
    """Build the clipped square region for a given continuous center.

    Pure arithmetic, no draws: side = dim * sqrt(1 - eta) per axis, each
    bound clipped into the image and then rounded half-away-from-zero.

    Raises:
        ValidationError: if eta is outside [0, 1] or dims are < 1.
    """
    if w < 1 or h < 1:
        raise ValidationError(f"image dims must be >= 1, got {w} x {h}")
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"invalid removal ratio: eta={eta}")
    side = math.sqrt(1.0 - eta)
    r_w = w * side
    r_h = h * side
    x1 = _round_half_away(max(cx - r_w / 2.0, 0.0))
    x2 = _round_half_away(min(cx + r_w / 2.0, float(w)))
    y1 = _round_half_away(max(cy - r_h / 2.0, 0.0))
    y2 = _round_half_away(min(cy + r_h / 2.0, float(h)))
    return CutRegion(x1=x1, x2=x2, y1=y1, y2=y2, w_img=w, h_img=h)


def sample_cut_region(rng, w: int, h: int, eta: float) -> CutRegion:
    """Sample a removal region: center x then center y, exactly two draws.

    The unclipped area ratio is exactly ``1 - eta``; clipping at the
    borders can only shrink it.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"invalid removal ratio: eta={eta}")
    cx = sample_uniform(rng, 0.0, float(w))
    cy = sample_uniform(rng, 0.0, float(h))
    return region_from_center(cx, cy, w, h, eta)


def region_to_mask(region: CutRegion) -> np.ndarray:
    """Rasterize a region into an H x W float mask: 0 inside, 1 outside."""
    mask = np.ones((region.h_img, region.w_img), dtype=np.float64)
    mask[region.y1:region.y2, region.x1:region.x2] = 0.0
    mask.setflags(write=False)
    return mask


def effective_area_ratio(region: CutRegion) -> float:
    """Actual removed fraction of the image, in [0, 1]."""
    return region.area / (region.w_img * region.h_img)
