"""
ERP-aware full-reference quality metrics

All three metrics weight rows by `cos(latitude)` to undo the ERP oversampling towards the poles.
SAL-PSNR additionally weights by saliency: `u(i, j) = (s(i, j) + floor * max(s)) * w(j)` in its default
multiplicative form.
"""

import math
from typing import Optional

import numpy as np
from scipy import ndimage

from odic.config import QualityConfig, SalPsnrCombination
from odic.exceptions import ArgumentError, DegenerateInputError
from odic.metrics.typing import MetricId, QualityScore
from odic.rasters import ErpImage, SaliencyMap, check_same_grid, check_spatial_match
from odic.sphere import latitude_weight_map
from odic.typing import FloatArrayT

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03

# BT.601 luma
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

_DEFAULT_CONFIG = QualityConfig()


def squared_error(ref: ErpImage, dist: ErpImage) -> FloatArrayT:
    """
    Per-pixel squared error, averaged over color channels
    """
    check_same_grid(ref, dist)

    return np.mean((ref.samples - dist.samples) ** 2, axis=0)


def _row_weights(height: int, width: int) -> FloatArrayT:
    weights = latitude_weight_map(width, height).weights

    return weights / weights.max()


def _row_grid(rows: FloatArrayT, width: int) -> FloatArrayT:
    # materialized so that every weighted sum runs over identically laid out arrays
    return np.repeat(rows[:, np.newaxis], width, axis=1)


def _psnr(metric: MetricId, max_value: float, wmse: float, cap_db: float) -> QualityScore:
    if wmse == 0:
        return QualityScore(metric=metric, value=cap_db, cap_applied=True)

    return QualityScore(metric=metric, value=10 * math.log10(max_value**2 / wmse))


def weighted_mse(error: FloatArrayT, weights: FloatArrayT) -> float:
    total = np.sum(weights)

    if total <= 0:
        raise DegenerateInputError("Weights sum to zero")

    return float(np.sum(error * weights) / total)


def ws_psnr(ref: ErpImage, dist: ErpImage, config: QualityConfig = _DEFAULT_CONFIG) -> QualityScore:
    error = squared_error(ref, dist)
    weights = _row_grid(_row_weights(ref.height, ref.width), ref.width)

    return _psnr(MetricId.WS_PSNR, ref.max_value, weighted_mse(error, weights), config.psnr_cap_db)


def saliency_weights(saliency: SaliencyMap, config: QualityConfig = _DEFAULT_CONFIG) -> FloatArrayT:
    """
    SAL-PSNR weight grid, normalized to a peak of 1
    """
    peak = saliency.values.max()

    if peak <= 0:
        raise DegenerateInputError("Saliency map is all zeros")

    attention = saliency.values / peak + config.saliency_floor
    attention = attention / attention.max()
    rows = _row_weights(saliency.height, saliency.width)[:, np.newaxis]

    if config.sal_psnr_combination is SalPsnrCombination.ADDITIVE:
        return (attention + rows) / 2

    return attention * rows


def sal_psnr(
    ref: ErpImage, dist: ErpImage, saliency: SaliencyMap, config: QualityConfig = _DEFAULT_CONFIG
) -> QualityScore:
    check_spatial_match(ref.height, ref.width, saliency.height, saliency.width, "Saliency map")
    error = squared_error(ref, dist)

    wmse = weighted_mse(error, saliency_weights(saliency, config))

    return _psnr(MetricId.SAL_PSNR, ref.max_value, wmse, config.psnr_cap_db)


def luma(img: ErpImage) -> FloatArrayT:
    if img.channels == 1:
        return img.samples[0]

    r, g, b = img.samples

    return LUMA_WEIGHTS[0] * r + LUMA_WEIGHTS[1] * g + LUMA_WEIGHTS[2] * b


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> FloatArrayT:
    offsets = np.arange(size, dtype=np.float64) - size // 2
    window = np.exp(-(offsets**2) / (2 * sigma**2))

    return window / window.sum()


def _filter_valid(plane: FloatArrayT, window: FloatArrayT) -> FloatArrayT:
    filtered = ndimage.correlate1d(plane, window, axis=0, mode="constant")
    filtered = ndimage.correlate1d(filtered, window, axis=1, mode="constant")
    radius = window.size // 2

    return filtered[radius : plane.shape[0] - radius, radius : plane.shape[1] - radius]


def ssim_map(ref: ErpImage, dist: ErpImage) -> FloatArrayT:
    """
    SSIM over the valid region of the sliding Gaussian window, computed on luma. Row `k` of the result is
    centered on source row `k + SSIM_WINDOW // 2`
    """
    check_same_grid(ref, dist)

    if ref.height < SSIM_WINDOW or ref.width < SSIM_WINDOW:
        raise ArgumentError(f"Images must be at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {ref.width}x{ref.height}")

    x = luma(ref)
    y = luma(dist)
    window = gaussian_window()

    mu_x = _filter_valid(x, window)
    mu_y = _filter_valid(y, window)
    sigma_xx = _filter_valid(x * x, window) - mu_x**2
    sigma_yy = _filter_valid(y * y, window) - mu_y**2
    sigma_xy = _filter_valid(x * y, window) - mu_x * mu_y

    c1 = (SSIM_K1 * ref.max_value) ** 2
    c2 = (SSIM_K2 * ref.max_value) ** 2

    numerator = (2 * mu_x * mu_y + c1) * (2 * sigma_xy + c2)
    denominator = (mu_x**2 + mu_y**2 + c1) * (sigma_xx + sigma_yy + c2)

    return numerator / denominator


def ws_ssim(ref: ErpImage, dist: ErpImage, latitude_weighting: bool = True) -> QualityScore:
    """
    Latitude-weighted mean of the SSIM map. `latitude_weighting=False` gives the plain mean SSIM
    """
    values = ssim_map(ref, dist)

    if not latitude_weighting:
        score = float(np.mean(values))
    else:
        radius = SSIM_WINDOW // 2
        rows = _row_weights(ref.height, ref.width)[radius : ref.height - radius]
        score = weighted_mse(values, _row_grid(rows, values.shape[1]))

    return QualityScore(metric=MetricId.WS_SSIM, value=float(np.clip(score, -1.0, 1.0)))


def evaluate(
    ref: ErpImage,
    dist: ErpImage,
    saliency: Optional[SaliencyMap] = None,
    config: QualityConfig = _DEFAULT_CONFIG,
) -> dict[MetricId, QualityScore]:
    """
    All three scores for one pair; without a saliency map SAL-PSNR uses a constant map
    """
    if saliency is None:
        saliency = SaliencyMap(values=np.ones((ref.height, ref.width)))

    return {
        MetricId.WS_PSNR: ws_psnr(ref, dist, config),
        MetricId.SAL_PSNR: sal_psnr(ref, dist, saliency, config),
        MetricId.WS_SSIM: ws_ssim(ref, dist),
    }
