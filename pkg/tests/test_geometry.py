"""Region sampling and mask rasterization against brute-force oracles."""

import math

import numpy as np
import pytest

from msda import (
    CutRegion,
    RngStream,
    ValidationError,
    effective_area_ratio,
    region_from_center,
    region_to_mask,
    sample_cut_region,
)

from conftest import ScriptedRng


def brute_force_mask(region: CutRegion) -> np.ndarray:
    """Independent oracle: per-pixel rectangle membership test."""
    mask = np.empty((region.h_img, region.w_img), dtype=np.float64)
    for py in range(region.h_img):
        for px in range(region.w_img):
            inside = region.x1 <= px < region.x2 and region.y1 <= py < region.y2
            mask[py, px] = 0.0 if inside else 1.0
    return mask


def test_eta_one_gives_empty_region():
    region = region_from_center(3.7, 5.1, 8, 8, eta=1.0)
    assert region.area == 0
    assert effective_area_ratio(region) == 0.0


def test_interior_center_hand_case():
    # 8x8, eta=0.75: side = 8*sqrt(0.25) = 4; center (4,4) gives [2,6)x[2,6).
    region = region_from_center(4.0, 4.0, 8, 8, eta=0.75)
    assert region.bounds() == (2, 6, 2, 6)
    zeros = int((brute_force_mask(region) == 0.0).sum())
    assert zeros == 16
    assert effective_area_ratio(region) == 16 / 64


def test_corner_center_clips_smaller():
    # Same square at center (0,0) clips to [0,2)x[0,2): actual < intended.
    region = region_from_center(0.0, 0.0, 8, 8, eta=0.75)
    assert region.bounds() == (0, 2, 0, 2)
    zeros = int((brute_force_mask(region) == 0.0).sum())
    assert zeros == 4
    assert effective_area_ratio(region) == 4 / 64
    assert effective_area_ratio(region) < 1 - 0.75


def test_sample_draws_center_x_then_y():
    # Unif(0,8) draws scale the scripted uniforms by 8.
    rng = ScriptedRng([0.5, 0.25])
    region = sample_cut_region(rng, 8, 8, eta=0.75)
    assert rng.consumed == 2
    # cx=4 -> x in [2,6); cy=2 -> y in [0,4).
    assert region.bounds() == (2, 6, 0, 4)


def test_sample_rejects_bad_eta():
    with pytest.raises(ValidationError):
        sample_cut_region(RngStream(1), 8, 8, eta=1.5)
    with pytest.raises(ValidationError):
        region_from_center(1, 1, 8, 8, eta=-0.1)


def test_region_invariants_enforced():
    with pytest.raises(ValidationError):
        CutRegion(x1=5, x2=3, y1=0, y2=1, w_img=8, h_img=8)
    with pytest.raises(ValidationError):
        CutRegion(x1=0, x2=9, y1=0, y2=1, w_img=8, h_img=8)


def test_mask_trivial_cases():
    empty = CutRegion(x1=3, x2=3, y1=2, y2=2, w_img=6, h_img=5)
    assert np.array_equal(region_to_mask(empty), np.ones((5, 6)))
    full = CutRegion(x1=0, x2=6, y1=0, y2=5, w_img=6, h_img=5)
    assert np.array_equal(region_to_mask(full), np.zeros((5, 6)))


def test_mask_matches_membership_oracle_hand_case():
    region = CutRegion(x1=2, x2=6, y1=2, y2=6, w_img=8, h_img=8)
    mask = region_to_mask(region)
    assert int((mask == 0.0).sum()) == 16
    assert np.array_equal(mask, brute_force_mask(region))


def test_mask_matches_membership_oracle_randomized():
    rs = np.random.RandomState(7)
    for _ in range(300):
        w, h = rs.randint(1, 17), rs.randint(1, 17)
        eta = rs.rand()
        region = sample_cut_region(RngStream(rs.randint(0, 2**31)), w, h, eta)
        mask = region_to_mask(region)
        assert np.array_equal(mask, brute_force_mask(region))
        assert int((mask == 0.0).sum()) == region.area
        assert set(np.unique(mask)) <= {0.0, 1.0}


def test_effective_ratio_never_exceeds_intended_plus_rounding_slack():
    rs = np.random.RandomState(11)
    for _ in range(2000):
        w, h = rs.randint(1, 33), rs.randint(1, 33)
        eta = rs.rand()
        region = sample_cut_region(RngStream(rs.randint(0, 2**31)), w, h, eta)
        slack = (2 * w + 2 * h + 4) / (w * h)
        assert effective_area_ratio(region) <= (1 - eta) + slack


def test_unclipped_interior_region_matches_intended_ratio():
    # Integer-exact configuration: side 24 on a 48 canvas, interior center.
    region = region_from_center(24.0, 24.0, 48, 48, eta=0.75)
    assert region.bounds() == (12, 36, 12, 36)
    assert effective_area_ratio(region) == 0.25


def test_region_shrinks_as_eta_grows():
    rs = np.random.RandomState(13)
    for _ in range(500):
        w, h = rs.randint(2, 33), rs.randint(2, 33)
        cx, cy = rs.rand() * w, rs.rand() * h
        e1, e2 = sorted(rs.rand(2))
        r1 = region_from_center(cx, cy, w, h, e1)
        r2 = region_from_center(cx, cy, w, h, e2)
        assert r1.x1 <= r2.x1 and r2.x2 <= r1.x2
        assert r1.y1 <= r2.y1 and r2.y2 <= r1.y2


def test_bounds_follow_clip_then_round_rule():
    # Spot-check the arithmetic against a direct scalar recomputation.
    rs = np.random.RandomState(17)
    for _ in range(1000):
        w, h = rs.randint(1, 65), rs.randint(1, 65)
        eta = rs.rand()
        cx, cy = rs.rand() * w, rs.rand() * h
        region = region_from_center(cx, cy, w, h, eta)
        rw = w * math.sqrt(1.0 - eta)
        rh = h * math.sqrt(1.0 - eta)
        assert region.x1 == math.floor(max(cx - rw / 2, 0.0) + 0.5)
        assert region.x2 == math.floor(min(cx + rw / 2, w) + 0.5)
        assert region.y1 == math.floor(max(cy - rh / 2, 0.0) + 0.5)
        assert region.y2 == math.floor(min(cy + rh / 2, h) + 0.5)
