"""
Raster types shared by every component: equirectangular images, saliency maps and fixation maps.

Samples are stored planar (`channels x height x width`) as float64 so that metric and codec code never
has to care about the on-disk bit depth.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from odic.exceptions import ArgumentError
from odic.typing import FloatArrayT


@dataclass(frozen=True)
class ErpImage:
    """
    Equirectangular pixel grid

    **Fields:**

    * **samples** - planar `(channels, height, width)` grid of values in `[0, max_value]`
    * **max_value** - peak sample value (255 for 8-bit content, 65535 for 16-bit)
    """

    samples: FloatArrayT
    max_value: float = 255.0

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)

        if samples.ndim == 2:
            samples = samples[np.newaxis]

        if samples.ndim != 3 or samples.shape[0] not in (1, 3):
            raise ArgumentError(f"ERP samples must be (1|3, H, W), got shape {samples.shape}")

        if samples.shape[1] < 1 or samples.shape[2] < 1:
            raise ArgumentError("ERP image has zero dimensions")

        if self.max_value <= 0:
            raise ArgumentError(f"max_value must be positive, got {self.max_value}")

        if not np.all(np.isfinite(samples)) or samples.min() < 0 or samples.max() > self.max_value:
            raise ArgumentError(f"ERP samples must be finite and within [0, {self.max_value}]")

        object.__setattr__(self, "samples", samples)

    @property
    def channels(self) -> int:
        return int(self.samples.shape[0])

    @property
    def height(self) -> int:
        return int(self.samples.shape[1])

    @property
    def width(self) -> int:
        return int(self.samples.shape[2])

    @property
    def is_canonical(self) -> bool:
        """
        Canonical ERP covers 360x180 degrees with square pixels, hence width == 2 * height
        """
        return self.width == 2 * self.height

    def with_samples(self, samples: FloatArrayT) -> "ErpImage":
        return replace(self, samples=samples)


@dataclass(frozen=True)
class SaliencyMap:
    """
    Continuous, non-negative attention density over an ERP grid of `(height, width)`
    """

    values: FloatArrayT

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)

        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ArgumentError(f"Saliency values must be a non-empty 2-D grid, got shape {values.shape}")

        if not np.all(np.isfinite(values)) or values.min() < 0:
            raise ArgumentError("Saliency values must be finite and non-negative")

        object.__setattr__(self, "values", values)

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    def with_values(self, values: FloatArrayT) -> "SaliencyMap":
        return replace(self, values=values)


@dataclass(frozen=True)
class FixationMap:
    """
    Binary grid of recorded gaze landing points
    """

    mask: np.ndarray
    fixation_count: int = field(init=False)

    def __post_init__(self) -> None:
        mask = np.asarray(self.mask) != 0

        if mask.ndim != 2 or mask.shape[0] < 1 or mask.shape[1] < 1:
            raise ArgumentError(f"Fixation grid must be a non-empty 2-D grid, got shape {mask.shape}")

        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "fixation_count", int(mask.sum()))

    @property
    def height(self) -> int:
        return int(self.mask.shape[0])

    @property
    def width(self) -> int:
        return int(self.mask.shape[1])


def check_same_grid(first: "ErpImage", second: "ErpImage") -> None:
    if first.samples.shape != second.samples.shape:
        raise ArgumentError(
            f"Images differ in shape: {first.samples.shape} vs {second.samples.shape}"
        )


def check_spatial_match(height: int, width: int, other_height: int, other_width: int, what: str) -> None:
    if (height, width) != (other_height, other_width):
        raise ArgumentError(f"{what} is {other_width}x{other_height}, expected {width}x{height}")
