from odic.losses.api import bits_per_pixel, fusion_loss, loss_report, rd_loss, sal_mse
from odic.losses.typing import LossReport

__all__ = ("bits_per_pixel", "fusion_loss", "loss_report", "rd_loss", "sal_mse", "LossReport")
