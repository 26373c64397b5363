from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from odic.bjontegaard.csvio import SWEEP_COLUMNS


class RdPoint(BaseModel):
    """
    One operating point of a rate-distortion sweep
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lambda_index: int = Field(ge=0)
    lambda_: float = Field(alias="lambda", gt=0.0)
    bpp: float = Field(gt=0.0)
    ws_psnr: float
    sal_psnr: float
    ws_ssim: float
    image: Optional[str] = None

    def as_row(self) -> Tuple[object, ...]:
        """
        Values ordered as the sweep CSV columns
        """
        values = self.model_dump(by_alias=True)
        values["image"] = self.image or ""

        return tuple(values[column] for column in SWEEP_COLUMNS)
