from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from odic.bjontegaard.exceptions import CurveError
from odic.typing import FloatArrayT

MIN_POINTS = 4


class RdPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    bpp: float = Field(gt=0.0)
    quality: float


class RdCurve(BaseModel):
    """
    Rate-distortion points ordered by strictly increasing bpp
    """

    model_config = ConfigDict(frozen=True)

    points: Tuple[RdPair, ...]
    label: str = ""

    @model_validator(mode="after")
    def _ordered(self) -> "RdCurve":
        rates = [point.bpp for point in self.points]

        if any(nxt <= prev for prev, nxt in zip(rates, rates[1:])):
            raise ValueError("RD curve bpp values must be strictly increasing")

        return self

    @classmethod
    def from_arrays(cls, bpp: Sequence[float], quality: Sequence[float], label: str = "") -> "RdCurve":
        if len(bpp) != len(quality):
            raise CurveError(f"bpp and quality differ in length: {len(bpp)} vs {len(quality)}")

        if any(nxt <= prev for prev, nxt in zip(bpp, bpp[1:])):
            raise CurveError("RD curve bpp values must be strictly increasing")

        if any(not rate > 0 for rate in bpp):
            raise CurveError("RD curve bpp values must be positive")

        points = tuple(RdPair(bpp=float(r), quality=float(q)) for r, q in zip(bpp, quality))

        return cls(points=points, label=label)

    @property
    def bpp(self) -> FloatArrayT:
        return np.array([point.bpp for point in self.points], dtype=np.float64)

    @property
    def quality(self) -> FloatArrayT:
        return np.array([point.quality for point in self.points], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.points)


class BdResult(BaseModel):
    """
    Bjontegaard deltas of a test curve against an anchor

    * **bd_psnr** - mean quality gap in dB over `overlap_interval` (log10 bpp)
    * **bd_rate** - mean rate difference in percent over `quality_interval` (dB)
    """

    model_config = ConfigDict(frozen=True)

    bd_psnr: float
    bd_rate: float
    overlap_interval: Tuple[float, float]
    quality_interval: Tuple[float, float]
    metric: str = "quality"
    degree: int = 3
