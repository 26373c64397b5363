"""
Saliency evaluation measures: CC, KLD, NSS and AUC-Judd
"""

import numpy as np

from odic.config import KldDirection, SaliencyMetricsConfig
from odic.exceptions import DegenerateInputError
from odic.rasters import FixationMap, SaliencyMap, check_spatial_match
from odic.typing import FloatArrayT

DEFAULT_EPSILON = 1e-7


def _centered(values: FloatArrayT, what: str) -> FloatArrayT:
    centered = values - values.mean()

    if not np.any(centered):
        raise DegenerateInputError(f"{what} has zero variance")

    return centered


def cc(pred: SaliencyMap, gt: SaliencyMap) -> float:
    """
    Pearson linear correlation coefficient over all pixels
    """
    check_spatial_match(gt.height, gt.width, pred.height, pred.width, "Predicted map")

    a = _centered(pred.values, "Predicted map")
    b = _centered(gt.values, "Ground-truth map")

    value = np.sum(a * b) / np.sqrt(np.sum(a * a) * np.sum(b * b))

    return float(np.clip(value, -1.0, 1.0))


def _distribution(values: FloatArrayT, what: str) -> FloatArrayT:
    total = values.sum()

    if total <= 0:
        raise DegenerateInputError(f"{what} is all zeros")

    return values / total


def kld(gt: SaliencyMap, pred: SaliencyMap, epsilon: float = DEFAULT_EPSILON) -> float:
    """
    `KL(gt || pred)` of the sum-normalized maps with `epsilon` regularizing numerator and denominator
    """
    check_spatial_match(gt.height, gt.width, pred.height, pred.width, "Predicted map")

    p = _distribution(gt.values, "Ground-truth map")
    q = _distribution(pred.values, "Predicted map")

    return float(np.sum(p * np.log((p + epsilon) / (q + epsilon))))


def kld_configured(pred: SaliencyMap, gt: SaliencyMap, config: SaliencyMetricsConfig) -> float:
    if config.kld_direction is KldDirection.PRED_GT:
        return kld(pred, gt, config.kld_epsilon)

    return kld(gt, pred, config.kld_epsilon)


def _check_fixations(pred: SaliencyMap, fix: FixationMap) -> None:
    check_spatial_match(pred.height, pred.width, fix.height, fix.width, "Fixation map")

    if fix.fixation_count == 0:
        raise DegenerateInputError("Fixation map has no fixations")


def nss(pred: SaliencyMap, fix: FixationMap) -> float:
    """
    Mean z-scored prediction at fixated pixels
    """
    _check_fixations(pred, fix)

    centered = _centered(pred.values, "Predicted map")
    z = centered / np.sqrt(np.mean(centered * centered))

    return float(np.mean(z[fix.mask]))


def roc_judd(pred: SaliencyMap, fix: FixationMap) -> tuple[FloatArrayT, FloatArrayT]:
    """
    `(fpr, tpr)` of the Judd ROC, anchored at (0, 0) and (1, 1)

    Thresholds are the distinct predicted values at fixations, in descending order. At each threshold a
    pixel counts as positive when its value is greater than or equal to the threshold
    """
    _check_fixations(pred, fix)

    non_fixation_count = fix.mask.size - fix.fixation_count

    if non_fixation_count == 0:
        raise DegenerateInputError("Every pixel is a fixation, false positive rate is undefined")

    fixated = np.sort(pred.values[fix.mask])
    others = np.sort(pred.values[~fix.mask])
    thresholds = np.unique(fixated)[::-1]

    # count of values >= t in an ascending array is len - searchsorted(left)
    tp = fixated.size - np.searchsorted(fixated, thresholds, side="left")
    fp = others.size - np.searchsorted(others, thresholds, side="left")

    tpr = np.concatenate([[0.0], tp / fixated.size, [1.0]])
    fpr = np.concatenate([[0.0], fp / others.size, [1.0]])

    return fpr, tpr


def auc_judd(pred: SaliencyMap, fix: FixationMap) -> float:
    fpr, tpr = roc_judd(pred, fix)

    return float(np.trapezoid(tpr, fpr))
