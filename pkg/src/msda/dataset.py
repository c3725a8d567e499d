"""Facial-expression dataset ingestion and train/test-time transforms.

Ingests the 48 x 48 grayscale emotion CSV ("emotion,pixels,Usage" with a
space-separated pixel string) together with its 10-annotator vote CSV,
relabels every image with the majority vote, drops images whose winning
vote is "unknown" or "NF" (no face), and emits 8-class one-hot labels.

Vote columns, in file order: neutral, happiness, surprise, sadness,
anger, disgust, fear, contempt, unknown, NF. The first eight are the
output classes 0..7. Ties are broken toward the lowest class index;
this is a deterministic choice the tie count in the manifest makes
auditable, since it can flip a handful of labels.

Pixels parse as integers 0..255 and scale to [0, 1] by dividing by 255.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .batches import ImageBatch, LabelBatch
from .errors import DataFormatError, ValidationError
from .rng import rand_below

VOTE_COLUMNS = (
    "neutral",
    "happiness",
    "surprise",
    "sadness",
    "anger",
    "disgust",
    "fear",
    "contempt",
    "unknown",
    "NF",
)
NUM_CLASSES = 8
FILTERED = -1

_SPLIT_BY_USAGE = {"Training": "train", "PublicTest": "val", "PrivateTest": "test"}
SPLITS = ("train", "val", "test")


@dataclass
class VotedSample:
    """One raw sample: pixel grid plus the 10-way annotator vote counts."""

    pixels: np.ndarray
    votes: tuple[int, ...]
    split: str


@dataclass
class PreparedDataset:
    """Filtered, relabeled dataset, one (images, labels) pair per split."""

    images: dict
    labels: dict
    split_sizes: dict
    filtered_sizes: dict
    tie_count: int

    def manifest_text(self) -> str:
        lines = ["msda dataset manifest"]
        for split in SPLITS:
            lines.append(
                f"{split}: kept={self.split_sizes[split]} filtered={self.filtered_sizes[split]}"
            )
        total = sum(self.split_sizes.values())
        dropped = sum(self.filtered_sizes.values())
        lines.append(f"total: kept={total} filtered={dropped}")
        lines.append(f"vote ties broken to lowest class index: {self.tie_count}")
        return "\n".join(lines) + "\n"


def majority_vote_label(votes) -> int:
    """Class index with the most votes, or FILTERED for unknown/NF winners.

    Ties go to the lowest index, so a base emotion tied with unknown or
    NF keeps the sample.

    Raises:
        ValidationError: wrong length, negative counts, or all zeros.
    """
    votes = list(votes)
    if len(votes) != len(VOTE_COLUMNS):
        raise ValidationError(f"expected {len(VOTE_COLUMNS)} vote counts, got {len(votes)}")
    if any(v < 0 for v in votes):
        raise ValidationError("vote counts must be non-negative")
    if sum(votes) == 0:
        raise ValidationError("no votes cast for sample")
    winner = max(range(len(votes)), key=lambda i: (votes[i], -i))
    if winner >= NUM_CLASSES:
        return FILTERED
    return winner


def vote_is_tied(votes) -> bool:
    """True when the maximum vote count is shared by several categories."""
    votes = list(votes)
    return votes.count(max(votes)) > 1


def prepare_ferplus(fer_csv, votes_csv) -> PreparedDataset:
    """Relabel, filter, and one-hot encode the paired CSV files.

    The pixel file supplies images and the split assignment; the vote
    file supplies the 10 annotator counts, row-aligned with the pixel
    file. Raises DataFormatError (with the offending row number) on
    malformed input and when the row counts disagree.
    """
    samples = _read_rows(fer_csv, votes_csv)
    per_split = {s: [] for s in SPLITS}
    filtered = {s: 0 for s in SPLITS}
    ties = 0
    for row_no, sample in samples:
        try:
            label = majority_vote_label(sample.votes)
        except ValidationError as exc:
            raise DataFormatError(f"{fer_csv}: row {row_no}: {exc}") from exc
        if vote_is_tied(sample.votes):
            ties += 1
        if label == FILTERED:
            filtered[sample.split] += 1
            continue
        per_split[sample.split].append((sample.pixels, label))

    images, labels, sizes = {}, {}, {}
    for split in SPLITS:
        rows = per_split[split]
        sizes[split] = len(rows)
        if not rows:
            images[split] = None
            labels[split] = None
            continue
        n = len(rows)
        h, w = rows[0][0].shape
        img = np.empty((n, 1, h, w), dtype=np.float64)
        lab = np.zeros((n, NUM_CLASSES), dtype=np.float64)
        for i, (pixels, cls) in enumerate(rows):
            img[i, 0] = pixels
            lab[i, cls] = 1.0
        images[split] = ImageBatch(img)
        labels[split] = LabelBatch(lab)
    return PreparedDataset(
        images=images,
        labels=labels,
        split_sizes=sizes,
        filtered_sizes=filtered,
        tie_count=ties,
    )


def _read_rows(fer_csv, votes_csv):
    fer_path, votes_path = Path(fer_csv), Path(votes_csv)
    with fer_path.open(newline="") as f:
        fer_rows = list(csv.reader(f))
    with votes_path.open(newline="") as f:
        vote_rows = list(csv.reader(f))
    if not fer_rows or not vote_rows:
        raise DataFormatError("empty csv input")

    fer_header = [c.strip() for c in fer_rows[0]]
    for col in ("emotion", "pixels", "Usage"):
        if col not in fer_header:
            raise DataFormatError(f"{fer_path}: missing column {col!r}")
    pix_idx = fer_header.index("pixels")
    usage_idx = fer_header.index("Usage")

    vote_header = [c.strip() for c in vote_rows[0]]
    vote_idx = []
    for col in VOTE_COLUMNS:
        if col not in vote_header:
            raise DataFormatError(f"{votes_path}: missing vote column {col!r}")
        vote_idx.append(vote_header.index(col))

    if len(fer_rows) != len(vote_rows):
        raise DataFormatError(
            f"row count mismatch: {len(fer_rows) - 1} pixel rows vs {len(vote_rows) - 1} vote rows"
        )

    out = []
    for row_no in range(1, len(fer_rows)):
        fer_row, vote_row = fer_rows[row_no], vote_rows[row_no]
        if len(fer_row) != len(fer_header):
            raise DataFormatError(f"{fer_path}: row {row_no}: expected {len(fer_header)} fields")
        if len(vote_row) != len(vote_header):
            raise DataFormatError(f"{votes_path}: row {row_no}: expected {len(vote_header)} fields")
        usage = fer_row[usage_idx].strip()
        if usage not in _SPLIT_BY_USAGE:
            raise DataFormatError(f"{fer_path}: row {row_no}: unknown Usage {usage!r}")
        try:
            flat = np.array([int(p) for p in fer_row[pix_idx].split()], dtype=np.int64)
        except ValueError:
            raise DataFormatError(f"{fer_path}: row {row_no}: unparseable pixel string") from None
        side = int(round(len(flat) ** 0.5))
        if side * side != len(flat):
            raise DataFormatError(
                f"{fer_path}: row {row_no}: {len(flat)} pixels is not a square image"
            )
        if flat.min() < 0 or flat.max() > 255:
            raise DataFormatError(f"{fer_path}: row {row_no}: pixel value out of 0..255")
        try:
            votes = tuple(int(vote_row[j]) for j in vote_idx)
        except ValueError:
            raise DataFormatError(f"{votes_path}: row {row_no}: unparseable vote count") from None
        pixels = flat.reshape(side, side).astype(np.float64) / 255.0
        out.append((row_no, VotedSample(pixels=pixels, votes=votes, split=_SPLIT_BY_USAGE[usage])))
    return out


def random_crop(image: np.ndarray, s: int, rng) -> np.ndarray:
    """Random s x s window of an image; two draws, x offset first.

    Works on the last two axes, so H x W and C x H x W both crop.
    """
    h, w = image.shape[-2], image.shape[-1]
    if s > h or s > w:
        raise ValidationError(f"crop size {s} exceeds image {h} x {w}")
    ox = rand_below(rng, w - s + 1)
    oy = rand_below(rng, h - s + 1)
    return image[..., oy:oy + s, ox:ox + s].copy()


def hflip(image: np.ndarray) -> np.ndarray:
    """Reflect horizontally: column j maps to w-1-j. Deterministic."""
    return image[..., ::-1].copy()


def mirror(image: np.ndarray, rng) -> np.ndarray:
    """Reflect horizontally with probability 0.5; one gate draw."""
    if rng.uniform01() < 0.5:
        return hflip(image)
    return image.copy()


@dataclass(frozen=True)
class CropSpec:
    """One deterministic test-time view: offset, size, mirrored or not."""

    ox: int
    oy: int
    s: int
    mirrored: bool


def ten_crop_specs(w: int, h: int, s: int) -> list[CropSpec]:
    """The ten view specs: TL, BL, TR, BR, center, then each mirrored."""
    if s > h or s > w:
        raise ValidationError(f"crop size {s} exceeds image {h} x {w}")
    corners = [
        (0, 0),
        (0, h - s),
        (w - s, 0),
        (w - s, h - s),
        ((w - s) // 2, (h - s) // 2),
    ]
    specs = [CropSpec(ox=ox, oy=oy, s=s, mirrored=False) for ox, oy in corners]
    specs += [CropSpec(ox=ox, oy=oy, s=s, mirrored=True) for ox, oy in corners]
    return specs


def ten_crop(image: np.ndarray, s: int) -> np.ndarray:
    """Ten deterministic views: 4 corner + center crops plus their mirrors.

    Returns an array of 10 crops stacked on a new leading axis, ordered
    as in ten_crop_specs (views 5..9 mirror views 0..4 horizontally).
    """
    views = []
    for spec in ten_crop_specs(image.shape[-1], image.shape[-2], s):
        crop = image[..., spec.oy:spec.oy + s, spec.ox:spec.ox + s]
        views.append(hflip(crop) if spec.mirrored else crop.copy())
    return np.stack(views, axis=0)


def average_probabilities(probs: np.ndarray) -> tuple[np.ndarray, int]:
    """Mean of an ensemble's probability rows and its argmax.

    Ties take the lowest index. Raises ValidationError if any row is not
    a probability vector (entries >= 0, sum within 1e-6 of 1).
    """
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix of rows, got shape {probs.shape}")
    if probs.min() < 0.0:
        raise ValidationError("probabilities must be non-negative")
    sums = probs.sum(axis=1)
    if np.abs(sums - 1.0).max() > 1e-6:
        i = int(np.argmax(np.abs(sums - 1.0)))
        raise ValidationError(f"row {i} sums to {sums[i]!r}, expected 1 +/- 1e-6")
    mean = probs.mean(axis=0)
    return mean, int(np.argmax(mean))
