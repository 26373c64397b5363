from enum import Enum

from pydantic import BaseModel, ConfigDict


class MetricId(str, Enum):
    WS_PSNR = "ws_psnr"
    SAL_PSNR = "sal_psnr"
    WS_SSIM = "ws_ssim"


class QualityScore(BaseModel):
    model_config = ConfigDict(frozen=True)

    metric: MetricId
    value: float
    cap_applied: bool = False

    def __float__(self) -> float:
        return self.value
