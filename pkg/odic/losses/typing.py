import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

RELATIVE_TOLERANCE = 1e-12


class LossReport(BaseModel):
    """
    Rate-distortion loss terms for one operating point

    `total == lambda * sal_mse + bpp` and, when the saliency terms are present, `fusion == kld - cc`
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    sal_mse: float = Field(ge=0.0)
    bpp: float = Field(ge=0.0)
    lambda_: float = Field(gt=0.0, alias="lambda")
    total: float
    kld: Optional[float] = None
    cc: Optional[float] = None
    fusion: Optional[float] = None

    @model_validator(mode="after")
    def _consistent(self) -> "LossReport":
        expected = self.lambda_ * self.sal_mse + self.bpp

        if not math.isclose(self.total, expected, rel_tol=RELATIVE_TOLERANCE):
            raise ValueError(f"total {self.total} != lambda * sal_mse + bpp = {expected}")

        if self.fusion is not None:
            if self.kld is None or self.cc is None:
                raise ValueError("fusion requires both kld and cc")

            if not math.isclose(self.fusion, self.kld - self.cc, rel_tol=RELATIVE_TOLERANCE, abs_tol=1e-15):
                raise ValueError(f"fusion {self.fusion} != kld - cc = {self.kld - self.cc}")

        return self
