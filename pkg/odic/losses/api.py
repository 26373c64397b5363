"""
Training objectives evaluated as plain numbers: saliency-weighted MSE, the rate-distortion loss, the
saliency fusion loss and bits per pixel
"""

import math
from typing import Optional

import numpy as np

from odic.exceptions import ArgumentError, DegenerateInputError
from odic.losses.typing import LossReport
from odic.metrics.quality import squared_error
from odic.metrics.saliency import cc, kld
from odic.rasters import ErpImage, FixationMap, SaliencyMap, check_spatial_match
from odic.saliency.priors import fixation_density

FIXATION_SIGMA_PX = 8.0


def sal_mse(x: ErpImage, x_hat: ErpImage, s: SaliencyMap) -> float:
    """
    `sum(S * e) / sum(S)` where `e` is the per-pixel squared error averaged over color channels.
    `S` is used as given, apply `ground_truth_weights` first for the sigmoid convention
    """
    error = squared_error(x, x_hat)
    check_spatial_match(x.height, x.width, s.height, s.width, "Saliency weights")

    total = np.sum(s.values)

    if total <= 0:
        raise DegenerateInputError("Saliency weights sum to zero")

    return float(np.sum(s.values * error) / total)


def rd_loss(sal_mse_value: float, bpp_value: float, lambda_: float) -> float:
    if not all(math.isfinite(v) for v in (sal_mse_value, bpp_value, lambda_)):
        raise ArgumentError("Loss terms must be finite")

    if not lambda_ > 0:
        raise ArgumentError(f"lambda must be positive, got {lambda_}")

    return lambda_ * sal_mse_value + bpp_value


def fusion_loss(
    pred: SaliencyMap,
    gt: Optional[SaliencyMap] = None,
    fixations: Optional[FixationMap] = None,
    sigma_px: float = FIXATION_SIGMA_PX,
) -> tuple[float, float, float]:
    """
    `(kld, cc, kld - cc)` for a predicted and a ground-truth map. Without a ground-truth map the fixation
    density is used in its place
    """
    if gt is None:
        if fixations is None:
            raise ArgumentError("fusion_loss needs a ground-truth map or a fixation map")

        gt = fixation_density(fixations, sigma_px)

    kld_value = kld(gt, pred)
    cc_value = cc(pred, gt)

    return kld_value, cc_value, kld_value - cc_value


def bits_per_pixel(bitstream_length: int, width: int, height: int) -> float:
    """
    `8 * bytes / pixels`, the byte count must include headers and side information
    """
    if width <= 0 or height <= 0:
        raise ArgumentError(f"Image area must be positive, got {width}x{height}")

    if bitstream_length < 0:
        raise ArgumentError(f"Bitstream length must be non-negative, got {bitstream_length}")

    return 8 * bitstream_length / (width * height)


def loss_report(
    x: ErpImage,
    x_hat: ErpImage,
    weights: SaliencyMap,
    bitstream_length: int,
    lambda_: float,
    pred: Optional[SaliencyMap] = None,
    gt: Optional[SaliencyMap] = None,
) -> LossReport:
    distortion = sal_mse(x, x_hat, weights)
    bpp = bits_per_pixel(bitstream_length, x.width, x.height)
    terms: dict[str, float] = {}

    if (pred is None) != (gt is None):
        raise ArgumentError("Fusion terms need both a predicted and a ground-truth map")

    if pred is not None and gt is not None:
        terms["kld"], terms["cc"], terms["fusion"] = fusion_loss(pred, gt)

    return LossReport(
        sal_mse=distortion,
        bpp=bpp,
        lambda_=lambda_,
        total=rd_loss(distortion, bpp, lambda_),
        **terms,
    )
