"""
Training-style augmentations for ERP rasters

Every operation is a pure function; random crops draw from a seeded generator so a record's crop only
depends on the base seed and the record index.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from odic.exceptions import ArgumentError
from odic.rasters import ErpImage, SaliencyMap, check_spatial_match
from odic.typing import FloatArrayT

SeedT = Union[int, np.random.SeedSequence]


class CropShape(Enum):
    """
    Crop sizes as `(width, height)`: a landscape and a portrait region
    """

    LANDSCAPE = (1024, 512)
    PORTRAIT = (512, 1024)

    @property
    def width(self) -> int:
        return self.value[0]

    @property
    def height(self) -> int:
        return self.value[1]


@dataclass(frozen=True)
class CropResult:
    image: ErpImage
    saliency: SaliencyMap
    x0: int
    y0: int


def hflip(img: ErpImage) -> ErpImage:
    """
    Horizontal flip (mirrors longitude)
    """
    return img.with_samples(img.samples[:, :, ::-1].copy())


def vmirror(img: ErpImage) -> ErpImage:
    """
    Vertical mirror (swaps the hemispheres)
    """
    return img.with_samples(img.samples[:, ::-1, :].copy())


def rotate_longitude(img: ErpImage, shift_px: int) -> ErpImage:
    """
    Rotate the sphere about its polar axis by `shift_px` columns, wrapping around the seam
    """
    return img.with_samples(np.roll(img.samples, shift_px, axis=2))


def derive_seed(seed: int, index: int) -> np.random.SeedSequence:
    """
    Independent per-record seed, the same whatever order records are processed in
    """
    return np.random.SeedSequence(seed, spawn_key=(index,))


def random_crop(
    img: ErpImage,
    saliency: Optional[SaliencyMap],
    shape: Union[CropShape, Tuple[int, int]],
    seed: SeedT,
) -> CropResult:
    """
    Crop the image and its saliency map at the same seeded offset

    **Parameters:**

    * **img** - source ERP image
    * **saliency** - saliency map co-registered with `img`
    * **shape** - a `CropShape` or a `(width, height)` tuple
    * **seed** - integer seed or `SeedSequence`

    The row offset is uniform over the valid range. The column offset is uniform over the whole width and
    the crop wraps around the seam, unless the crop spans the full width (offset 0).
    """
    if saliency is None:
        raise ArgumentError("random_crop needs the saliency map co-registered with the image")

    check_spatial_match(img.height, img.width, saliency.height, saliency.width, "saliency map")

    crop_w, crop_h = (shape.width, shape.height) if isinstance(shape, CropShape) else shape

    if crop_w < 1 or crop_h < 1:
        raise ArgumentError(f"Crop must be non-empty, got {crop_w}x{crop_h}")

    if crop_h > img.height or crop_w > img.width:
        raise ArgumentError(f"Crop {crop_w}x{crop_h} is larger than the {img.width}x{img.height} source")

    rng = np.random.default_rng(seed)
    y0 = int(rng.integers(0, img.height - crop_h + 1))
    x0 = int(rng.integers(0, img.width)) if crop_w < img.width else 0

    rows = np.arange(y0, y0 + crop_h)
    cols = (x0 + np.arange(crop_w)) % img.width

    return CropResult(
        image=img.with_samples(img.samples[:, rows][:, :, cols]),
        saliency=saliency.with_values(saliency.values[rows][:, cols]),
        x0=x0,
        y0=y0,
    )


def _area_matrix(source: int, target: int) -> FloatArrayT:
    scale = source / target
    edges = np.arange(target + 1) * scale
    matrix = np.zeros((target, source))

    for i in range(target):
        start, stop = edges[i], edges[i + 1]

        for j in range(int(math.floor(start)), min(source, int(math.ceil(stop)))):
            matrix[i, j] = min(stop, j + 1) - max(start, j)

    return matrix / scale


def _bilinear_matrix(source: int, target: int, wrap: bool) -> FloatArrayT:
    centers = (np.arange(target) + 0.5) * source / target - 0.5

    if not wrap:
        centers = np.clip(centers, 0, source - 1)

    left = np.floor(centers).astype(np.int64)
    frac = centers - left
    right = left + 1

    if wrap:
        left, right = left % source, right % source
    else:
        right = np.minimum(right, source - 1)

    matrix = np.zeros((target, source))
    rows = np.arange(target)
    np.add.at(matrix, (rows, left), 1.0 - frac)
    np.add.at(matrix, (rows, right), frac)

    return matrix


def resample_matrix(source: int, target: int, wrap: bool = False) -> FloatArrayT:
    """
    Linear map from `source` to `target` samples: area averaging when shrinking, bilinear when enlarging
    """
    if target == source:
        return np.eye(source)

    if target < source:
        return _area_matrix(source, target)

    return _bilinear_matrix(source, target, wrap)


def resample_grid(values: FloatArrayT, target_w: int, target_h: int) -> FloatArrayT:
    """
    Resample the last two axes; columns wrap around when enlarging, rows are clamped
    """
    if target_w < 1 or target_h < 1:
        raise ArgumentError(f"Resize target must be at least 1x1, got {target_w}x{target_h}")

    height, width = values.shape[-2:]

    if (height, width) == (target_h, target_w):
        return values.copy()

    rows = resample_matrix(height, target_h)
    cols = resample_matrix(width, target_w, wrap=True)

    return rows @ values @ cols.T


def resize(img: ErpImage, target_w: int, target_h: int) -> ErpImage:
    samples = resample_grid(img.samples, target_w, target_h)

    return img.with_samples(np.clip(samples, 0.0, img.max_value))


def resize_saliency(s: SaliencyMap, target_w: int, target_h: int) -> SaliencyMap:
    return s.with_values(np.maximum(resample_grid(s.values, target_w, target_h), 0.0))


class CropMode(str, Enum):
    NONE = "none"
    LANDSCAPE = "landscape"
    PORTRAIT = "portrait"
    MIXED = "mixed"


@dataclass(frozen=True)
class AugmentedPair:
    image: ErpImage
    saliency: SaliencyMap
    crop_offset: Optional[Tuple[int, int]]
    flipped: bool
    mirrored: bool


def augment_pair(
    img: ErpImage,
    saliency: SaliencyMap,
    seed: SeedT,
    crop: CropMode = CropMode.NONE,
    flip_prob: float = 0.5,
) -> AugmentedPair:
    """
    One training sample: optional random crop (a mixed batch picks landscape or portrait per sample),
    then a horizontal flip and a vertical mirror, each with probability `flip_prob`, applied to both rasters

    The generator is consumed in a fixed order whatever options are set, so enabling one augmentation never
    changes the draws of another.
    """
    if not 0.0 <= flip_prob <= 1.0:
        raise ArgumentError(f"flip_prob must lie in [0, 1], got {flip_prob}")

    rng = np.random.default_rng(seed)
    crop_seed = int(rng.integers(0, 2**63 - 1))
    portrait = bool(rng.random() < 0.5)
    flipped = bool(rng.random() < flip_prob)
    mirrored = bool(rng.random() < flip_prob)

    offset: Optional[Tuple[int, int]] = None

    if crop is not CropMode.NONE:
        if crop is CropMode.MIXED:
            shape = CropShape.PORTRAIT if portrait else CropShape.LANDSCAPE
        else:
            shape = CropShape.LANDSCAPE if crop is CropMode.LANDSCAPE else CropShape.PORTRAIT

        cropped = random_crop(img, saliency, shape, crop_seed)
        img, saliency, offset = cropped.image, cropped.saliency, (cropped.x0, cropped.y0)

    if flipped:
        img = hflip(img)
        saliency = saliency.with_values(saliency.values[:, ::-1].copy())

    if mirrored:
        img = vmirror(img)
        saliency = saliency.with_values(saliency.values[::-1, :].copy())

    return AugmentedPair(image=img, saliency=saliency, crop_offset=offset, flipped=flipped, mirrored=mirrored)
