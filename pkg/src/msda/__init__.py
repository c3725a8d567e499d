"""Deterministic mixed-sample data augmentation.

Batch operators (mixcut, cutout, mixup, cutmix) over N x C x H x W
pixel tensors and N x K soft labels, plus dataset preparation, a
test-time ten-crop ensemble, the MXB1 tensor file format, and a CLI.

The surface most callers need:

    apply_policy(images, labels, policy, rng)  ->  (images, labels, record)
    ten_crop(image, s)                         ->  10 stacked views
    read_mxb1(path) / write_mxb1(path, array)
"""

from .augment import (
    AppliedRecord,
    PairedBatch,
    apply_mask,
    apply_policy,
    cutmix_batch,
    cutout_batch,
    mix_images,
    mix_labels,
    mixcut_batch,
    mixup_batch,
    shuffle_pair,
)
from .batches import ImageBatch, LabelBatch, validate_batch
from .dataset import (
    CropSpec,
    PreparedDataset,
    average_probabilities,
    hflip,
    majority_vote_label,
    mirror,
    prepare_ferplus,
    random_crop,
    ten_crop,
    ten_crop_specs,
)
from .errors import DataFormatError, ValidationError
from .geometry import (
    CutRegion,
    effective_area_ratio,
    region_from_center,
    region_to_mask,
    sample_cut_region,
)
from .mxb1 import read_mxb1, write_mxb1
from .policy import AugmentPolicy, default_policy, format_policy, parse_policy
from .rng import RngStream, bernoulli, sample_beta11, sample_uniform

__version__ = "0.1.0"

__all__ = [
    "AppliedRecord",
    "AugmentPolicy",
    "CropSpec",
    "CutRegion",
    "DataFormatError",
    "ImageBatch",
    "LabelBatch",
    "PairedBatch",
    "PreparedDataset",
    "RngStream",
    "ValidationError",
    "apply_mask",
    "apply_policy",
    "average_probabilities",
    "bernoulli",
    "cutmix_batch",
    "cutout_batch",
    "default_policy",
    "effective_area_ratio",
    "format_policy",
    "hflip",
    "majority_vote_label",
    "mirror",
    "mix_images",
    "mix_labels",
    "mixcut_batch",
    "mixup_batch",
    "parse_policy",
    "prepare_ferplus",
    "random_crop",
    "read_mxb1",
    "region_from_center",
    "region_to_mask",
    "sample_beta11",
    "sample_cut_region",
    "sample_uniform",
    "shuffle_pair",
    "ten_crop",
    "ten_crop_specs",
    "validate_batch",
    "write_mxb1",
]
