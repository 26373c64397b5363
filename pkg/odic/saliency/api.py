"""
Saliency mask pipeline: rescale + sigmoid, average pooling to latent resolution, mask residual and
latent masking of all channels past a preserved split
"""

import math

import numpy as np
from scipy.special import expit

from odic.exceptions import ArgumentError, DegenerateInputError
from odic.rasters import SaliencyMap
from odic.saliency.typing import (
    DEFAULT_DOWNSAMPLE_FACTOR,
    DEFAULT_PRESERVED_SPLIT,
    DownsampledMask,
    LatentTensor,
    MaskResidual,
)
from odic.typing import FloatArrayT

RESCALE_PEAK = 255.0


def rescale_and_sigmoid(raw: SaliencyMap) -> SaliencyMap:
    """
    Min-max rescale the raw map to [0, 255], then apply the logistic. Output lies in [0.5, 1)
    """
    low = raw.values.min()
    high = raw.values.max()

    if high == low:
        raise DegenerateInputError("Cannot rescale a constant saliency map")

    rescaled = (raw.values - low) / (high - low) * RESCALE_PEAK

    return raw.with_values(expit(rescaled))


def ground_truth_weights(raw: SaliencyMap) -> SaliencyMap:
    """
    Elementwise logistic of a ground-truth map, the weighting convention of the saliency-weighted MSE
    """
    return raw.with_values(expit(raw.values))


def _block_sums(values: FloatArrayT, factor: int) -> FloatArrayT:
    rows = np.arange(0, values.shape[0], factor)
    cols = np.arange(0, values.shape[1], factor)

    return np.add.reduceat(np.add.reduceat(values, rows, axis=0), cols, axis=1)


def average_pool(values: FloatArrayT, factor: int) -> FloatArrayT:
    """
    Non-overlapping `factor x factor` means; edge blocks average over their in-bounds pixels only
    """
    sums = _block_sums(values, factor)
    counts = _block_sums(np.ones_like(values), factor)

    return sums / counts


def downsample_mask(s: SaliencyMap, factor: int = DEFAULT_DOWNSAMPLE_FACTOR) -> DownsampledMask:
    if factor < 1:
        raise ArgumentError(f"Downsample factor must be >= 1, got {factor}")

    if factor > s.height and factor > s.width:
        raise ArgumentError(f"Downsample factor {factor} exceeds both map dimensions {s.width}x{s.height}")

    return DownsampledMask(values=average_pool(s.values, factor))


def latent_shape(height: int, width: int, factor: int = DEFAULT_DOWNSAMPLE_FACTOR) -> tuple[int, int]:
    return math.ceil(height / factor), math.ceil(width / factor)


def mask_residual(m: DownsampledMask, alpha: float = 1.0) -> MaskResidual:
    if not alpha > 0:
        raise ArgumentError(f"alpha must be positive, got {alpha}")

    if m.values.min() < 0 or m.values.max() > 1:
        raise ArgumentError(f"Mask values must lie in [0, 1], got [{m.values.min()}, {m.values.max()}]")

    return MaskResidual(values=(m.values + alpha) / alpha, alpha=alpha)


def _check_masking(y: LatentTensor, r: MaskResidual, split: int) -> None:
    if (r.h, r.w) != (y.h, y.w):
        raise ArgumentError(f"Residual grid {r.w}x{r.h} does not match latent grid {y.w}x{y.h}")

    if not 0 <= split <= y.channels:
        raise ArgumentError(f"split must be within [0, {y.channels}], got {split}")


def apply_latent_mask(y: LatentTensor, r: MaskResidual, split: int = DEFAULT_PRESERVED_SPLIT) -> LatentTensor:
    """
    Copy channels `[0, split)` verbatim and multiply channels `[split, C)` by the residual grid
    """
    _check_masking(y, r, split)

    masked = y.coefficients.copy()
    masked[split:] *= r.values[np.newaxis]

    return LatentTensor(coefficients=masked)


def unmask_latent(y_masked: LatentTensor, r: MaskResidual, split: int = DEFAULT_PRESERVED_SPLIT) -> LatentTensor:
    _check_masking(y_masked, r, split)

    restored = y_masked.coefficients.copy()
    restored[split:] /= r.values[np.newaxis]

    return LatentTensor(coefficients=restored)


def saliency_residual(
    raw: SaliencyMap, factor: int = DEFAULT_DOWNSAMPLE_FACTOR, alpha: float = 1.0
) -> MaskResidual:
    """
    The whole mask pipeline: rescale + sigmoid, pooling to the latent grid, residual
    """
    return mask_residual(downsample_mask(rescale_and_sigmoid(raw), factor), alpha)
