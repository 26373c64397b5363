from typing import Callable, List, Tuple

import numpy as np
import pytest

from odic.rasters import ErpImage, SaliencyMap
from odic.sphere import great_circle_distance, spherical_coordinate_channels

HOTSPOT_SIGMA = 0.4


def band_limited_erp(width: int, height: int, channels: int = 3, seed: int = 0) -> ErpImage:
    """
    Smooth synthetic ERP content: a few low-order spherical waves per channel, scaled to [20, 235]
    """
    rng = np.random.default_rng(seed)
    coords = spherical_coordinate_channels(width, height)
    planes = []

    for _ in range(channels):
        plane = np.zeros((height, width))

        for order in range(1, 4):
            a, b = rng.uniform(-1.0, 1.0, size=2)
            phase = rng.uniform(0.0, 2 * np.pi)
            plane += a * np.cos(order * coords.longitude + phase) * np.cos(coords.latitude)
            plane += b * np.sin(order * coords.latitude)

        planes.append(plane)

    samples = np.stack(planes)
    samples = (samples - samples.min()) / (samples.max() - samples.min())

    return ErpImage(samples=20.0 + 215.0 * samples)


def _hotspot_envelope(width: int, height: int) -> np.ndarray:
    coords = spherical_coordinate_channels(width, height)
    distance = great_circle_distance(coords.latitude, coords.longitude, 0.0, 0.0)

    return np.exp(-(distance**2) / (2 * HOTSPOT_SIGMA**2))


def hotspot_saliency(width: int, height: int) -> SaliencyMap:
    """
    Gaussian hotspot at the ERP center that falls to zero away from it
    """
    return SaliencyMap(values=_hotspot_envelope(width, height))


def hotspot_scene(width: int = 128, height: int = 64, seed: int = 0) -> Tuple[ErpImage, SaliencyMap]:
    """
    Band-limited content under fine random texture, twice as strong inside a hotspot at the ERP center, plus
    a saliency map peaking on that hotspot
    """
    rng = np.random.default_rng(seed + 1)
    base = band_limited_erp(width, height, seed=seed)
    strength = 24.0 + 24.0 * _hotspot_envelope(width, height)

    texture = rng.normal(0.0, 1.0, size=base.samples.shape) * strength
    image = base.with_samples(np.clip(base.samples + texture, 0.0, 255.0))

    return image, hotspot_saliency(width, height)


def checker_erp(width: int, height: int, seed: int = 0) -> ErpImage:
    """
    Band-limited content with a spherical checkerboard of sharp 40-level steps on top
    """
    base = band_limited_erp(width, height, seed=seed)
    coords = spherical_coordinate_channels(width, height)
    cells = np.floor(coords.longitude / (np.pi / 8)) + np.floor(coords.latitude / (np.pi / 8))
    steps = np.where(cells % 2 == 0, -20.0, 20.0)

    return base.with_samples(np.clip(base.samples + steps, 0.0, 255.0))


def sweep_corpus(width: int = 512, height: int = 256) -> List[Tuple[str, ErpImage]]:
    """
    The three synthetic images every RD sweep property is checked on
    """
    return [
        ("smooth", band_limited_erp(width, height, seed=3)),
        ("textured", hotspot_scene(width, height, seed=4)[0]),
        ("checker", checker_erp(width, height, seed=5)),
    ]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def erp_image() -> ErpImage:
    return band_limited_erp(64, 32)


@pytest.fixture
def make_erp() -> Callable[..., ErpImage]:
    return band_limited_erp


@pytest.fixture
def scene() -> Tuple[ErpImage, SaliencyMap]:
    return hotspot_scene()
