from dataclasses import dataclass

import numpy as np

from odic.exceptions import ArgumentError
from odic.typing import FloatArrayT

DEFAULT_LATENT_CHANNELS = 192
DEFAULT_PRESERVED_SPLIT = 48
DEFAULT_DOWNSAMPLE_FACTOR = 16


@dataclass(frozen=True)
class DownsampledMask:
    """
    Saliency map average-pooled to latent resolution. Any finite values; the mask residual needs them in [0, 1]
    """

    values: FloatArrayT

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)

        if values.ndim != 2:
            raise ArgumentError(f"Mask must be a 2-D grid, got shape {values.shape}")

        if not np.all(np.isfinite(values)):
            raise ArgumentError("Mask values must be finite")

        object.__setattr__(self, "values", values)

    @property
    def h(self) -> int:
        return int(self.values.shape[0])

    @property
    def w(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class MaskResidual:
    """
    Multiplier grid `(mask + alpha) / alpha`, values in `[1, (1 + alpha) / alpha]`
    """

    values: FloatArrayT
    alpha: float = 1.0

    @property
    def h(self) -> int:
        return int(self.values.shape[0])

    @property
    def w(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class LatentTensor:
    """
    `C x h x w` coefficient volume
    """

    coefficients: FloatArrayT

    def __post_init__(self) -> None:
        coefficients = np.asarray(self.coefficients, dtype=np.float64)

        if coefficients.ndim != 3:
            raise ArgumentError(f"Latent must be (C, h, w), got shape {coefficients.shape}")

        if not np.all(np.isfinite(coefficients)):
            raise ArgumentError("Latent coefficients must be finite")

        object.__setattr__(self, "coefficients", coefficients)

    @property
    def channels(self) -> int:
        return int(self.coefficients.shape[0])

    @property
    def h(self) -> int:
        return int(self.coefficients.shape[1])

    @property
    def w(self) -> int:
        return int(self.coefficients.shape[2])
