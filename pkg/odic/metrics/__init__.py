from odic.metrics.quality import evaluate, sal_psnr, ssim_map, ws_psnr, ws_ssim
from odic.metrics.saliency import auc_judd, cc, kld, kld_configured, nss, roc_judd
from odic.metrics.typing import MetricId, QualityScore

__all__ = (
    "evaluate",
    "sal_psnr",
    "ssim_map",
    "ws_psnr",
    "ws_ssim",
    "auc_judd",
    "cc",
    "kld",
    "kld_configured",
    "nss",
    "roc_judd",
    "MetricId",
    "QualityScore",
)
