"""Shared test helpers.

ScriptedRng replays a fixed list of uniform draws, which keeps oracle
tests independent of the generator: anything asserted against scripted
draws holds for any conforming RNG.
"""

import numpy as np
import pytest

from msda import ImageBatch, LabelBatch


class ScriptedRng:
    """Replays a pre-recorded uniform01 sequence; raises when exhausted."""

    def __init__(self, values):
        self.values = list(values)
        self.pos = 0

    def uniform01(self):
        if self.pos >= len(self.values):
            raise AssertionError("ScriptedRng exhausted: operation drew more than scripted")
        v = self.values[self.pos]
        self.pos += 1
        return v

    @property
    def consumed(self):
        return self.pos


class RecordingRng:
    """Wraps a real stream and records every uniform handed out."""

    def __init__(self, inner):
        self.inner = inner
        self.drawn = []

    def uniform01(self):
        v = self.inner.uniform01()
        self.drawn.append(v)
        return v


def random_image_batch(rs: np.random.RandomState, n, c, h, w) -> ImageBatch:
    return ImageBatch(rs.rand(n, c, h, w))


def random_label_batch(rs: np.random.RandomState, n, k) -> LabelBatch:
    raw = rs.rand(n, k)
    return LabelBatch(raw / raw.sum(axis=1, keepdims=True))


def one_hot_labels(indices, k) -> LabelBatch:
    lab = np.zeros((len(indices), k), dtype=np.float64)
    for row, idx in enumerate(indices):
        lab[row, idx] = 1.0
    return LabelBatch(lab)


@pytest.fixture
def rs():
    return np.random.RandomState(20240501)


# ---------------------------------------------------------------------------
# Scalar brute-force recomputation of the mixcut pipeline. Pure Python floats
# and lists, no shared code with the library's vectorized path; consumes the
# same recorded uniforms so any conforming generator gives the same answer.
# ---------------------------------------------------------------------------

def scalar_round_clip(v, lo, hi):
    import math

    return math.floor(min(max(v, lo), hi) + 0.5)


def scalar_region(cx, cy, w, h, eta):
    import math

    rw = w * math.sqrt(1.0 - eta)
    rh = h * math.sqrt(1.0 - eta)
    x1 = scalar_round_clip(cx - rw / 2.0, 0.0, float("inf"))
    x2 = scalar_round_clip(cx + rw / 2.0, float("-inf"), float(w))
    y1 = scalar_round_clip(cy - rh / 2.0, 0.0, float("inf"))
    y2 = scalar_round_clip(cy + rh / 2.0, float("-inf"), float(h))
    return x1, x2, y1, y2


def scalar_fisher_yates(n, draws, pos):
    import math

    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = math.floor(draws[pos] * (i + 1))
        pos += 1
        perm[i], perm[j] = perm[j], perm[i]
    return perm, pos


def scalar_mixcut(images, labels, policy, draws):
    """Recompute mixcut from raw draws; returns (images, labels, applied).

    ``images`` is a nested list [n][c][h][w], ``labels`` is [n][k]; the
    returned structures are the same shape.
    """
    pos = 0
    gate = draws[pos] < policy.gamma
    pos += 1
    if not gate:
        return images, labels, False
    n = len(images)
    c = len(images[0])
    h = len(images[0][0])
    w = len(images[0][0][0])
    k = len(labels[0])
    perm, pos = scalar_fisher_yates(n, draws, pos)

    if policy.lambda_fixed is not None:
        lam = policy.lambda_fixed
    else:
        lam = 0.0 + (1.0 - 0.0) * draws[pos]
        pos += 1
    if policy.beta_fixed is not None:
        eta = 1.0 - policy.beta_fixed
    else:
        eta = 0.0 + (1.0 - 0.0) * draws[pos]
        pos += 1
    cx = 0.0 + (float(w) - 0.0) * draws[pos]
    pos += 1
    cy = 0.0 + (float(h) - 0.0) * draws[pos]
    pos += 1
    x1, x2, y1, y2 = scalar_region(cx, cy, w, h, eta)

    om = 1.0 - lam
    out_images = [
        [
            [
                [
                    (lam * images[i][ch][py][px] + om * images[perm[i]][ch][py][px])
                    * (0.0 if (x1 <= px < x2 and y1 <= py < y2) else 1.0)
                    for px in range(w)
                ]
                for py in range(h)
            ]
            for ch in range(c)
        ]
        for i in range(n)
    ]
    out_labels = [
        [lam * labels[i][j] + om * labels[perm[i]][j] for j in range(k)] for i in range(n)
    ]
    return out_images, out_labels, True
