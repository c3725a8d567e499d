"""Render sample grids to PNG for eyeballing augmentations.

Cells are separated (and framed) by a black gutter of GRID_PAD pixels,
so an r x c grid of h x w images measures
(r*h + (r+1)*GRID_PAD) x (c*w + (c+1)*GRID_PAD). Grayscale input is
replicated to RGB; pixel values quantize by round(v * 255).
"""

import numpy as np
from PIL import Image

from .batches import ImageBatch
from .errors import ValidationError

GRID_PAD = 2


def to_uint8(values: np.ndarray) -> np.ndarray:
    """Quantize [0, 1] floats to bytes with round-to-nearest."""
    return np.rint(np.asarray(values) * 255.0).astype(np.uint8)


def render_grid(images: ImageBatch, rows: int, cols: int, pad: int = GRID_PAD) -> np.ndarray:
    """Compose the first rows*cols samples into an RGB byte canvas."""
    if rows < 1 or cols < 1:
        raise ValidationError(f"grid must be at least 1x1, got {rows}x{cols}")
    if rows * cols > images.n:
        raise ValidationError(f"grid {rows}x{cols} needs {rows * cols} samples, have {images.n}")
    if images.c not in (1, 3):
        raise ValidationError(f"preview supports 1 or 3 channels, got {images.c}")

    h, w = images.h, images.w
    canvas = np.zeros((rows * h + (rows + 1) * pad, cols * w + (cols + 1) * pad, 3), dtype=np.uint8)
    for idx in range(rows * cols):
        r, c = divmod(idx, cols)
        cell = to_uint8(images.data[idx])
        rgb = np.repeat(cell, 3, axis=0) if images.c == 1 else cell
        y0 = pad + r * (h + pad)
        x0 = pad + c * (w + pad)
        canvas[y0:y0 + h, x0:x0 + w, :] = np.moveaxis(rgb, 0, -1)
    return canvas


def save_png(canvas: np.ndarray, path) -> None:
    Image.fromarray(canvas, mode="RGB").save(path, format="PNG")


def load_png(path) -> np.ndarray:
    """Read a PNG back as an H x W x 3 byte array."""
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"))
