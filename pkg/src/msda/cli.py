"""Command-line entry points: prep, augment, preview, stats.

Every command resolves one seed (--seed flag, else the MSDA_SEED
environment variable, else 0) and prints it together with the fully
resolved policy before doing any work, so a run can always be repeated.

Exit codes: 0 success, 2 validation failure, 3 IO or parse failure.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .augment import apply_policy
from .batches import ImageBatch, LabelBatch, validate_batch
from .dataset import prepare_ferplus, SPLITS
from .errors import DataFormatError, ValidationError
from .geometry import effective_area_ratio, region_from_center, region_to_mask
from .mxb1 import read_mxb1, write_mxb1
from .policy import AugmentPolicy, format_policy, parse_policy
from .preview import GRID_PAD, render_grid, save_png
from .rng import RngStream, bernoulli, sample_beta11, sample_uniform

DEFAULT_BATCH_SIZE = 128
DEFAULT_TRIALS = 100_000


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msda",
        description="Deterministic mixed-sample data augmentation toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="relabel and pack the emotion CSV dataset into MXB1 tensors")
    p.add_argument("--fer", required=True, help="pixel csv (emotion,pixels,Usage)")
    p.add_argument("--votes", required=True, help="annotator vote csv")
    p.add_argument("--out", required=True, help="output path prefix")
    _add_seed(p)

    p = sub.add_parser("augment", help="stream MXB1 batches through an augmentation policy")
    p.add_argument("--in-images", required=True)
    p.add_argument("--in-labels", required=True)
    p.add_argument("--out", required=True, help="output path prefix")
    p.add_argument("--batch-size", type=int, default=DEFAULT_BATCH_SIZE)
    _add_seed(p)
    _add_policy(p)

    p = sub.add_parser("preview", help=f"render an augmented sample grid as PNG "
                                       f"(cells separated by a {GRID_PAD}px black gutter)")
    p.add_argument("--in-images", required=True)
    p.add_argument("--in-labels", default=None)
    p.add_argument("--out", required=True, help="output png path")
    p.add_argument("--grid", default="2x2", help="RxC, e.g. 3x4")
    _add_seed(p)
    _add_policy(p)

    p = sub.add_parser("stats", help="empirical draw statistics for a policy")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--width", type=int, default=48)
    p.add_argument("--height", type=int, default=48)
    p.add_argument("--interior-only", action="store_true",
                   help="clamp region centers so the square never clips at borders")
    _add_seed(p)
    _add_policy(p)
    return parser


def _add_seed(p):
    p.add_argument("--seed", type=int, default=None,
                   help="64-bit seed; falls back to MSDA_SEED, then 0")


def _add_policy(p):
    p.add_argument("--policy-file", default=None, help="key=value policy text file")
    p.add_argument("--method", default=None, choices=["mixcut", "cutout", "mixup", "cutmix", "none"])
    p.add_argument("--lambda", dest="lam", default=None, help="beta11 or a float in [0,1]")
    p.add_argument("--beta", default=None, help="beta11 or a float in [0,1]")
    p.add_argument("--gamma", default=None, help="float in [0,1]")
    p.add_argument("--per-sample", action="store_true",
                   help="draw scalars per sample instead of per batch")


def resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MSDA_SEED")
    if env is not None:
        return int(env)
    return 0


def resolve_policy(args) -> AugmentPolicy:
    if args.policy_file is not None:
        if args.method is not None:
            raise ValidationError("give either --policy-file or --method, not both")
        with open(args.policy_file) as f:
            return parse_policy(f.read())
    if args.method is None:
        raise ValidationError("a policy is required: --policy-file or --method")
    tokens = [f"method={args.method}"]
    if args.lam is not None:
        tokens.append(f"lambda={args.lam}")
    if args.beta is not None:
        tokens.append(f"beta={args.beta}")
    if args.gamma is not None:
        tokens.append(f"gamma={args.gamma}")
    if args.per_sample:
        tokens.append("per_sample=true")
    return parse_policy(" ".join(tokens))


def cmd_prep(args) -> int:
    seed = resolve_seed(args)
    print(f"seed: {seed} (prep is deterministic; seed unused)")
    prepared = prepare_ferplus(args.fer, args.votes)
    for split in SPLITS:
        if prepared.images[split] is None:
            continue
        write_mxb1(f"{args.out}.{split}.images.mxb1", prepared.images[split].data)
        write_mxb1(f"{args.out}.{split}.labels.mxb1", prepared.labels[split].data)
    manifest = prepared.manifest_text()
    with open(f"{args.out}.manifest.txt", "w") as f:
        f.write(manifest)
    print(manifest, end="")
    return 0


def cmd_augment(args) -> int:
    seed = resolve_seed(args)
    policy = resolve_policy(args)
    print(f"seed: {seed}")
    print(f"policy: {format_policy(policy)}")
    if args.batch_size < 1:
        raise ValidationError(f"batch size must be >= 1, got {args.batch_size}")

    images32 = read_mxb1(args.in_images)
    labels32 = read_mxb1(args.in_labels)
    if images32.ndim != 4:
        raise DataFormatError(f"{args.in_images}: expected rank 4, got {images32.ndim}")
    if labels32.ndim != 2:
        raise DataFormatError(f"{args.in_labels}: expected rank 2, got {labels32.ndim}")
    images = images32.astype(np.float64)
    labels = labels32.astype(np.float64)
    if images.shape[0] != labels.shape[0]:
        raise ValidationError(
            f"dimension mismatch: {images.shape[0]} images vs {labels.shape[0]} label rows"
        )

    rng = RngStream(seed)
    n = images.shape[0]
    out_images = np.empty_like(images)
    out_labels = np.empty_like(labels)
    log_lines = []
    batches = 0
    for start in range(0, n, args.batch_size):
        stop = min(start + args.batch_size, n)
        ib = ImageBatch(images[start:stop])
        lb = LabelBatch(labels[start:stop])
        oi, ol, record = apply_policy(ib, lb, policy, rng)
        validate_batch(oi, ol)
        out_images[start:stop] = oi.data
        out_labels[start:stop] = ol.data
        entry = {"batch": batches, "start": start, "stop": stop}
        entry.update(record.to_dict())
        log_lines.append(json.dumps(entry, sort_keys=True))
        batches += 1

    write_mxb1(f"{args.out}.images.mxb1", out_images)
    write_mxb1(f"{args.out}.labels.mxb1", out_labels)
    with open(f"{args.out}.log.jsonl", "w") as f:
        f.write("\n".join(log_lines) + "\n")
    applied = sum(1 for line in log_lines if '"applied": true' in line)
    print(f"batches: {batches} applied: {applied}")
    return 0


def cmd_preview(args) -> int:
    seed = resolve_seed(args)
    policy = resolve_policy(args)
    print(f"seed: {seed}")
    print(f"policy: {format_policy(policy)}")
    try:
        rows, cols = (int(v) for v in args.grid.lower().split("x"))
    except ValueError:
        raise ValidationError(f"--grid must look like RxC, got {args.grid!r}") from None

    images32 = read_mxb1(args.in_images)
    if images32.ndim != 4:
        raise DataFormatError(f"{args.in_images}: expected rank 4, got {images32.ndim}")
    count = rows * cols
    if count > images32.shape[0]:
        raise ValidationError(f"grid {rows}x{cols} needs {count} samples, file has {images32.shape[0]}")
    images = ImageBatch(images32[:count].astype(np.float64))
    if args.in_labels is not None:
        labels32 = read_mxb1(args.in_labels)
        if labels32.ndim != 2:
            raise DataFormatError(f"{args.in_labels}: expected rank 2, got {labels32.ndim}")
        labels = LabelBatch(labels32[:count].astype(np.float64))
    else:
        labels = LabelBatch(np.ones((count, 1)))

    rng = RngStream(seed)
    out_images, _, record = apply_policy(images, labels, policy, rng)
    canvas = render_grid(out_images, rows, cols)
    save_png(canvas, args.out)
    print(f"record: {json.dumps(record.to_dict(), sort_keys=True)}")
    print(f"wrote {args.out} ({canvas.shape[0]}x{canvas.shape[1]} px)")
    return 0


def cmd_stats(args) -> int:
    seed = resolve_seed(args)
    policy = resolve_policy(args)
    print(f"seed: {seed}")
    print(f"policy: {format_policy(policy)}")
    if args.trials < 1:
        raise ValidationError(f"--trials must be >= 1, got {args.trials}")
    if args.width < 1 or args.height < 1:
        raise ValidationError("--width and --height must be >= 1")

    w, h = args.width, args.height
    rng = RngStream(seed)
    applied = 0
    lams, etas, ratios, oracle_ratios = [], [], [], []

    for _ in range(args.trials):
        if policy.method == "none":
            continue
        if policy.method in ("mixcut", "cutmix"):
            if not bernoulli(rng, policy.gamma):
                continue
        applied += 1
        if policy.method in ("mixcut", "mixup"):
            lam = policy.lambda_fixed if policy.lambda_fixed is not None else sample_beta11(rng)
            lams.append(lam)
        if policy.method == "mixup":
            continue
        if policy.beta_fixed is not None:
            eta = 1.0 - policy.beta_fixed
        else:
            eta = sample_beta11(rng)
        etas.append(eta)
        cx = sample_uniform(rng, 0.0, float(w))
        cy = sample_uniform(rng, 0.0, float(h))
        if args.interior_only:
            half_w = w * math.sqrt(1.0 - eta) / 2.0
            half_h = h * math.sqrt(1.0 - eta) / 2.0
            cx = min(max(cx, half_w), w - half_w)
            cy = min(max(cy, half_h), h - half_h)
        region = region_from_center(cx, cy, w, h, eta)
        ratios.append(effective_area_ratio(region))
        zeros = int((region_to_mask(region) == 0.0).sum())
        oracle_ratios.append(zeros / (w * h))

    print(f"trials: {args.trials}")
    print(f"canvas: {w}x{h}")
    print(f"applied: {applied} rate={applied / args.trials:.6f}")
    _report("lambda", lams)
    _report("eta", etas)
    if etas:
        _report("intended removal ratio (1-eta)", [1.0 - e for e in etas])
    _report("effective removal ratio", ratios)
    if ratios:
        mean_fast = float(np.mean(ratios))
        mean_oracle = float(np.mean(oracle_ratios))
        exact = all(a == b for a, b in zip(ratios, oracle_ratios))
        print(f"rasterization oracle mean: {mean_oracle:.6f} "
              f"(arithmetic mean {mean_fast:.6f}, per-trial exact match: {exact})")
    return 0


def _report(name, values):
    if not values:
        print(f"{name}: n/a")
        return
    arr = np.asarray(values)
    print(f"{name}: mean={arr.mean():.6f} std={arr.std():.6f} "
          f"min={arr.min():.6f} max={arr.max():.6f}")


_COMMANDS = {
    "prep": cmd_prep,
    "augment": cmd_augment,
    "preview": cmd_preview,
    "stats": cmd_stats,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DataFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def console_main():
    raise SystemExit(main())
