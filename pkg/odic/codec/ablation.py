"""
Masking ablation: the same image swept with latent masking off (anchor) and on (test)
"""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from odic.bjontegaard import BdResult, RdCurve, bd_analysis
from odic.codec.api import rd_sweep
from odic.codec.events import CodecListener
from odic.codec.typing import RdPoint
from odic.config import CodecConfig, QualityConfig, Settings
from odic.metrics import MetricId
from odic.rasters import ErpImage, SaliencyMap

logger = logging.getLogger("odic.codec")

ABLATION_METRICS = (MetricId.WS_PSNR, MetricId.SAL_PSNR)


class AblationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    anchor: List[RdPoint]
    test: List[RdPoint]
    bd: Dict[MetricId, BdResult]
    matched_gain: Dict[MetricId, List[Optional[float]]]


def curve_of(points: Sequence[RdPoint], metric: MetricId, label: str = "") -> RdCurve:
    ordered = sorted(points, key=lambda point: point.bpp)

    return RdCurve.from_arrays(
        [point.bpp for point in ordered],
        [getattr(point, metric.value) for point in ordered],
        label=label,
    )


def matched_bpp_gain(anchor: Sequence[RdPoint], test: Sequence[RdPoint], metric: MetricId) -> List[Optional[float]]:
    """
    For every test point, its quality minus the anchor quality linearly interpolated in log-bpp at the
    same rate. Test points outside the anchor's rate range get `None`
    """
    ordered = sorted(anchor, key=lambda point: point.bpp)
    log_rates = np.log([point.bpp for point in ordered])
    qualities = np.array([getattr(point, metric.value) for point in ordered])
    gains: List[Optional[float]] = []

    for point in test:
        log_rate = float(np.log(point.bpp))

        if log_rate < log_rates[0] or log_rate > log_rates[-1]:
            gains.append(None)
            continue

        gains.append(getattr(point, metric.value) - float(np.interp(log_rate, log_rates, qualities)))

    return gains


def masking_ablation(
    img: ErpImage,
    saliency: SaliencyMap,
    cfg: CodecConfig = CodecConfig(),
    quality: QualityConfig = QualityConfig(),
    image_name: Optional[str] = None,
    settings: Optional[Settings] = None,
    listeners: Optional[Sequence[CodecListener]] = None,
) -> AblationReport:
    """
    BD-PSNR/BD-rate of latent masking against the unmasked codec on WS-PSNR and SAL-PSNR

    Both sweeps evaluate SAL-PSNR with the same saliency map.
    """
    anchor = rd_sweep(
        img,
        saliency,
        cfg.model_copy(update={"saliency_mode": False}),
        quality,
        image_name,
        settings,
        listeners,
    )
    test = rd_sweep(
        img,
        saliency,
        cfg.model_copy(update={"saliency_mode": True}),
        quality,
        image_name,
        settings,
        listeners,
    )

    bd: Dict[MetricId, BdResult] = {}
    matched_gain: Dict[MetricId, List[Optional[float]]] = {}

    for metric in ABLATION_METRICS:
        bd[metric] = bd_analysis(
            curve_of(anchor, metric, "masking off"),
            curve_of(test, metric, "masking on"),
            metric=metric.value,
        )
        matched_gain[metric] = matched_bpp_gain(anchor, test, metric)

        logger.info(
            "Masking ablation on %s: BD-PSNR %.3f dB, BD-rate %.2f %%",
            metric.value,
            bd[metric].bd_psnr,
            bd[metric].bd_rate,
        )

    return AblationReport(anchor=anchor, test=test, bd=bd, matched_gain=matched_gain)
