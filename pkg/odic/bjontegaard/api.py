"""
Bjontegaard delta metrics

Classic procedure: fit a polynomial (cubic by default) by least squares and integrate the fitted curves
exactly over the strict intersection of the two domains. Extrapolation is refused.
"""

import logging
from typing import Tuple

import numpy as np
from numpy.polynomial import Polynomial

from odic.bjontegaard.exceptions import CurveError, NoOverlapError
from odic.bjontegaard.typing import MIN_POINTS, BdResult, RdCurve
from odic.typing import FloatArrayT

logger = logging.getLogger("odic.bjontegaard")

DEFAULT_DEGREE = 3


def _check_curve(curve: RdCurve, degree: int) -> None:
    if len(curve) < MIN_POINTS:
        raise CurveError(f"RD curve needs at least {MIN_POINTS} points, got {len(curve)}")

    if len(curve) <= degree:
        raise CurveError(f"A degree {degree} fit needs more than {degree} points, got {len(curve)}")


def _check_quality_monotone(curve: RdCurve) -> None:
    if np.any(np.diff(curve.quality) <= 0):
        raise CurveError("BD-rate needs quality strictly increasing with bpp")


def _overlap(first: FloatArrayT, second: FloatArrayT) -> Tuple[float, float]:
    low = max(first.min(), second.min())
    high = min(first.max(), second.max())

    if not high > low:
        raise NoOverlapError(
            f"Curves do not overlap: [{first.min()}, {first.max()}] vs [{second.min()}, {second.max()}]"
        )

    return float(low), float(high)


def _mean_gap(
    anchor_x: FloatArrayT, anchor_y: FloatArrayT, test_x: FloatArrayT, test_y: FloatArrayT, degree: int
) -> Tuple[float, Tuple[float, float]]:
    low, high = _overlap(anchor_x, test_x)

    anchor_integral = Polynomial.fit(anchor_x, anchor_y, degree).integ()
    test_integral = Polynomial.fit(test_x, test_y, degree).integ()

    area = (test_integral(high) - test_integral(low)) - (anchor_integral(high) - anchor_integral(low))

    return float(area / (high - low)), (low, high)


def bd_psnr(anchor: RdCurve, test: RdCurve, degree: int = DEFAULT_DEGREE) -> float:
    """
    Average quality difference (test - anchor) over the overlapping log10-rate interval
    """
    return _bd_psnr(anchor, test, degree)[0]


def _bd_psnr(anchor: RdCurve, test: RdCurve, degree: int) -> Tuple[float, Tuple[float, float]]:
    _check_curve(anchor, degree)
    _check_curve(test, degree)

    return _mean_gap(np.log10(anchor.bpp), anchor.quality, np.log10(test.bpp), test.quality, degree)


def bd_rate(anchor: RdCurve, test: RdCurve, degree: int = DEFAULT_DEGREE) -> float:
    """
    Average rate difference of test against anchor in percent, negative means the test saves bits
    """
    return _bd_rate(anchor, test, degree)[0]


def _bd_rate(anchor: RdCurve, test: RdCurve, degree: int) -> Tuple[float, Tuple[float, float]]:
    _check_curve(anchor, degree)
    _check_curve(test, degree)
    _check_quality_monotone(anchor)
    _check_quality_monotone(test)

    delta, interval = _mean_gap(anchor.quality, np.log10(anchor.bpp), test.quality, np.log10(test.bpp), degree)

    return float(100 * (10**delta - 1)), interval


def bd_analysis(anchor: RdCurve, test: RdCurve, degree: int = DEFAULT_DEGREE, metric: str = "quality") -> BdResult:
    psnr_delta, rate_interval = _bd_psnr(anchor, test, degree)
    rate_delta, quality_interval = _bd_rate(anchor, test, degree)

    logger.debug("BD %s: %.4f dB, %.3f%%", metric, psnr_delta, rate_delta)

    return BdResult(
        bd_psnr=psnr_delta,
        bd_rate=rate_delta,
        overlap_interval=rate_interval,
        quality_interval=quality_interval,
        metric=metric,
        degree=degree,
    )
