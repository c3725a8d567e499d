"""Command-line behaviour: seeds, exit codes, file outputs, reports."""

import json

import numpy as np

from msda import read_mxb1, write_mxb1
from msda.cli import main
from msda.preview import GRID_PAD, load_png

from test_dataset import votes_for, write_fixture


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def make_inputs(tmp_path, n=8, c=1, h=6, w=6, k=4, seed=0):
    rs = np.random.RandomState(seed)
    images = (np.round(rs.rand(n, c, h, w) * 255) / 255.0).astype(np.float32)
    labels = np.zeros((n, k), dtype=np.float32)
    labels[np.arange(n), rs.randint(0, k, size=n)] = 1.0
    ip, lp = tmp_path / "in.images.mxb1", tmp_path / "in.labels.mxb1"
    write_mxb1(ip, images)
    write_mxb1(lp, labels)
    return ip, lp


# -------------------------------------------------------------------- prep

def test_prep_writes_tensors_and_manifest(tmp_path, capsys):
    rows = [
        ("Training", [0, 64, 128, 255], votes_for(1)),
        ("Training", [10, 20, 30, 40], votes_for(9)),
        ("PrivateTest", [5, 5, 5, 5], votes_for(7)),
    ]
    fer, vot = write_fixture(tmp_path, rows)
    out = tmp_path / "prep"
    code, stdout, _ = run(
        ["prep", "--fer", str(fer), "--votes", str(vot), "--out", str(out)], capsys
    )
    assert code == 0
    assert "seed: 0" in stdout
    assert "train: kept=1 filtered=1" in stdout
    assert "test: kept=1 filtered=0" in stdout
    images = read_mxb1(f"{out}.train.images.mxb1")
    labels = read_mxb1(f"{out}.train.labels.mxb1")
    assert images.shape == (1, 1, 2, 2)
    assert labels.shape == (1, 8)
    assert (tmp_path / "prep.manifest.txt").read_text().startswith("msda dataset manifest")


def test_prep_reruns_byte_identical(tmp_path, capsys):
    rows = [("Training", [0, 1, 2, 3], votes_for(2))]
    fer, vot = write_fixture(tmp_path, rows)
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        code, _, _ = run(["prep", "--fer", str(fer), "--votes", str(vot), "--out", str(out)], capsys)
        assert code == 0
    for suffix in (".train.images.mxb1", ".train.labels.mxb1", ".manifest.txt"):
        assert (tmp_path / f"a{suffix}").read_bytes() == (tmp_path / f"b{suffix}").read_bytes()


def test_prep_parse_failure_exits_3(tmp_path, capsys):
    fer, vot = write_fixture(tmp_path, [("Training", [1, 2, 3, 4], votes_for(0))])
    fer.write_text("emotion,pixels,Usage\n0,bad pixels here,Training\n")
    code, _, err = run(["prep", "--fer", str(fer), "--votes", str(vot), "--out", str(tmp_path / "x")], capsys)
    assert code == 3
    assert "row 1" in err


# ----------------------------------------------------------------- augment

def test_augment_none_is_byte_identity(tmp_path, capsys):
    ip, lp = make_inputs(tmp_path)
    out = tmp_path / "out"
    code, stdout, _ = run(
        ["augment", "--in-images", str(ip), "--in-labels", str(lp),
         "--out", str(out), "--method", "none", "--seed", "7"], capsys
    )
    assert code == 0
    assert "seed: 7" in stdout
    assert "policy: method=none" in stdout
    assert (tmp_path / "out.images.mxb1").read_bytes() == ip.read_bytes()
    assert (tmp_path / "out.labels.mxb1").read_bytes() == lp.read_bytes()


def test_augment_same_seed_is_byte_identical(tmp_path, capsys):
    ip, lp = make_inputs(tmp_path, n=16)
    for out in ("r1", "r2"):
        code, _, _ = run(
            ["augment", "--in-images", str(ip), "--in-labels", str(lp),
             "--out", str(tmp_path / out), "--method", "mixcut",
             "--seed", "42", "--batch-size", "4"], capsys
        )
        assert code == 0
    for suffix in (".images.mxb1", ".labels.mxb1", ".log.jsonl"):
        assert (tmp_path / f"r1{suffix}").read_bytes() == (tmp_path / f"r2{suffix}").read_bytes()


def test_augment_log_records_batches(tmp_path, capsys):
    ip, lp = make_inputs(tmp_path, n=10)
    out = tmp_path / "out"
    code, _, _ = run(
        ["augment", "--in-images", str(ip), "--in-labels", str(lp),
         "--out", str(out), "--method", "cutout", "--seed", "1", "--batch-size", "4"], capsys
    )
    assert code == 0
    lines = [json.loads(l) for l in (tmp_path / "out.log.jsonl").read_text().splitlines()]
    assert len(lines) == 3  # 4 + 4 + 2 samples
    assert [l["batch"] for l in lines] == [0, 1, 2]
    assert all(l["method"] == "cutout" and l["applied"] for l in lines)
    assert lines[-1]["stop"] == 10


def test_augment_gate_rate_over_many_batches(tmp_path, capsys):
    n = 10_000
    rs = np.random.RandomState(3)
    write_mxb1(tmp_path / "i.mxb1", rs.rand(n, 1, 2, 2).astype(np.float32) * 0)
    labels = np.ones((n, 1), dtype=np.float32)
    write_mxb1(tmp_path / "l.mxb1", labels)
    code, _, _ = run(
        ["augment", "--in-images", str(tmp_path / "i.mxb1"), "--in-labels", str(tmp_path / "l.mxb1"),
         "--out", str(tmp_path / "out"), "--method", "mixcut", "--gamma", "0.5",
         "--seed", "11", "--batch-size", "1"], capsys
    )
    assert code == 0
    lines = (tmp_path / "out.log.jsonl").read_text().splitlines()
    assert len(lines) == n
    applied = sum(1 for l in lines if '"applied": true' in l)
    assert abs(applied / n - 0.5) < 0.02


def test_augment_env_seed_fallback(tmp_path, capsys, monkeypatch):
    ip, lp = make_inputs(tmp_path)
    monkeypatch.setenv("MSDA_SEED", "123")
    code, stdout, _ = run(
        ["augment", "--in-images", str(ip), "--in-labels", str(lp),
         "--out", str(tmp_path / "env"), "--method", "mixcut"], capsys
    )
    assert code == 0 and "seed: 123" in stdout
    monkeypatch.delenv("MSDA_SEED")
    code, _, _ = run(
        ["augment", "--in-images", str(ip), "--in-labels", str(lp),
         "--out", str(tmp_path / "flag"), "--method", "mixcut", "--seed", "123"], capsys
    )
    assert code == 0
    assert (tmp_path / "env.images.mxb1").read_bytes() == (tmp_path / "flag.images.mxb1").read_bytes()


def test_augment_policy_file(tmp_path, capsys):
    ip, lp = make_inputs(tmp_path)
    pf = tmp_path / "p.policy"
    pf.write_text("method=mixcut\nlambda=0.5\nbeta=0.25\ngamma=1.0\n")
    code, stdout, _ = run(
        ["augment", "--in-images", str(ip), "--in-labels", str(lp),
         "--out", str(tmp_path / "out"), "--policy-file", str(pf), "--seed", "5"], capsys
    )
    assert code == 0
    assert "policy: method=mixcut lambda=0.5 beta=0.25 gamma=1.0" in stdout


def test_augment_validation_failure_exits_2(tmp_path, capsys):
    ip, _ = make_inputs(tmp_path)
    bad = np.full((8, 3), 0.9, dtype=np.float32)  # rows sum to 2.7
    write_mxb1(tmp_path / "bad.mxb1", bad)
    code, _, err = run(
        ["augment", "--in-images", str(ip), "--in-labels", str(tmp_path / "bad.mxb1"),
         "--out", str(tmp_path / "out"), "--method", "mixcut", "--seed", "1"], capsys
    )
    assert code == 2
    assert "error:" in err


def test_augment_count_mismatch_exits_2(tmp_path, capsys):
    ip, _ = make_inputs(tmp_path, n=8)
    labels = np.eye(3, dtype=np.float32)
    write_mxb1(tmp_path / "short.mxb1", labels)
    code, _, _ = run(
        ["augment", "--in-images", str(ip), "--in-labels", str(tmp_path / "short.mxb1"),
         "--out", str(tmp_path / "out"), "--method", "none", "--seed", "1"], capsys
    )
    assert code == 2


def test_augment_missing_file_exits_3(tmp_path, capsys):
    code, _, err = run(
        ["augment", "--in-images", str(tmp_path / "nope.mxb1"),
         "--in-labels", str(tmp_path / "nope2.mxb1"),
         "--out", str(tmp_path / "out"), "--method", "none"], capsys
    )
    assert code == 3


def test_augment_corrupt_file_exits_3(tmp_path, capsys):
    (tmp_path / "junk.mxb1").write_bytes(b"JUNKJUNKJUNK")
    code, _, _ = run(
        ["augment", "--in-images", str(tmp_path / "junk.mxb1"),
         "--in-labels", str(tmp_path / "junk.mxb1"),
         "--out", str(tmp_path / "out"), "--method", "none"], capsys
    )
    assert code == 3


def test_augment_rejects_bad_gamma_exits_2(tmp_path, capsys):
    ip, lp = make_inputs(tmp_path)
    code, _, err = run(
        ["augment", "--in-images", str(ip), "--in-labels", str(lp),
         "--out", str(tmp_path / "out"), "--method", "mixcut", "--gamma", "1.5"], capsys
    )
    assert code == 2
    assert "probability" in err


# ----------------------------------------------------------------- preview

def test_preview_single_cell_round_trip(tmp_path, capsys):
    ip, lp = make_inputs(tmp_path, n=1, h=5, w=4)
    out = tmp_path / "grid.png"
    code, stdout, _ = run(
        ["preview", "--in-images", str(ip), "--out", str(out),
         "--grid", "1x1", "--method", "none", "--seed", "3"], capsys
    )
    assert code == 0
    decoded = load_png(out)
    pad = GRID_PAD
    source = read_mxb1(ip)[0, 0].astype(np.float64)
    expect = np.rint(source * 255.0).astype(np.uint8)
    assert np.array_equal(decoded[pad:pad + 5, pad:pad + 4, 0], expect)


def test_preview_grid_dimensions(tmp_path, capsys):
    ip, _ = make_inputs(tmp_path, n=4, h=6, w=6)
    out = tmp_path / "grid.png"
    code, stdout, _ = run(
        ["preview", "--in-images", str(ip), "--out", str(out),
         "--grid", "2x2", "--method", "none", "--seed", "3"], capsys
    )
    assert code == 0
    decoded = load_png(out)
    assert decoded.shape == (2 * 6 + 3 * GRID_PAD, 2 * 6 + 3 * GRID_PAD, 3)


def test_preview_mixcut_region_is_black(tmp_path, capsys):
    # All-white input; lambda 1 keeps the A side, so only the cut shows.
    write_mxb1(tmp_path / "white.mxb1", np.ones((1, 1, 8, 8), dtype=np.float32))
    out = tmp_path / "grid.png"
    code, stdout, _ = run(
        ["preview", "--in-images", str(tmp_path / "white.mxb1"), "--out", str(out),
         "--grid", "1x1", "--method", "mixcut", "--lambda", "1.0",
         "--beta", "0.25", "--gamma", "1.0", "--seed", "9"], capsys
    )
    assert code == 0
    record = json.loads(next(l for l in stdout.splitlines() if l.startswith("record: "))[8:])
    assert record["applied"] is True
    x1, x2, y1, y2 = record["region"]
    decoded = load_png(out)
    pad = GRID_PAD
    cell = decoded[pad:pad + 8, pad:pad + 8, 0]
    for py in range(8):
        for px in range(8):
            expected = 0 if (x1 <= px < x2 and y1 <= py < y2) else 255
            assert cell[py, px] == expected


def test_preview_too_small_input_exits_2(tmp_path, capsys):
    ip, _ = make_inputs(tmp_path, n=2)
    code, _, _ = run(
        ["preview", "--in-images", str(ip), "--out", str(tmp_path / "g.png"),
         "--grid", "2x2", "--method", "none"], capsys
    )
    assert code == 2


# ------------------------------------------------------------------- stats

def test_stats_cutout_interior_only_is_exact(capsys):
    code, stdout, _ = run(
        ["stats", "--method", "cutout", "--trials", "400", "--seed", "5",
         "--width", "48", "--height", "48", "--interior-only"], capsys
    )
    assert code == 0
    line = next(l for l in stdout.splitlines() if l.startswith("effective removal ratio:"))
    assert "mean=0.250000" in line
    assert "std=0.000000" in line
    assert "min=0.250000" in line and "max=0.250000" in line
    assert "per-trial exact match: True" in stdout


def test_stats_mixcut_defaults_at_full_scale(capsys):
    code, stdout, _ = run(
        ["stats", "--method", "mixcut", "--trials", "100000", "--seed", "2"], capsys
    )
    assert code == 0
    assert "policy: method=mixcut lambda=beta11 beta=beta11 gamma=0.5" in stdout
    rate = float(stdout.split("rate=")[1].split()[0])
    assert abs(rate - 0.5) < 0.01
    lam_mean = float(stdout.split("lambda: mean=")[1].split()[0])
    assert abs(lam_mean - 0.5) < 0.01
    assert "per-trial exact match: True" in stdout


def test_stats_rejects_bad_trials(capsys):
    code, _, _ = run(["stats", "--method", "mixcut", "--trials", "0"], capsys)
    assert code == 2
