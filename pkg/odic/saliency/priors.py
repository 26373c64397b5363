"""
Non-learned saliency sources: the equator-biased synthetic map used in place of a trained predictor, a
fixation density and an equator-bias refinement for predicted maps
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage

from odic.exceptions import ArgumentError
from odic.rasters import FixationMap, SaliencyMap
from odic.sphere import great_circle_distance, spherical_coordinate_channels
from odic.typing import FloatArrayT


@dataclass(frozen=True)
class Hotspot:
    """
    Gaussian bump on the sphere

    * **latitude**, **longitude** - center in radians
    * **amplitude** - peak height added to the base map
    * **sigma** - angular standard deviation in radians
    """

    latitude: float
    longitude: float
    amplitude: float
    sigma: float


def _latitude_prior(latitude: FloatArrayT, sigma_lat: float) -> FloatArrayT:
    return np.exp(-(latitude**2) / (2 * sigma_lat**2))


def equator_prior_saliency(
    width: int, height: int, sigma_lat: float, hotspots: Optional[Sequence[Hotspot]] = None
) -> SaliencyMap:
    if not sigma_lat > 0:
        raise ArgumentError(f"sigma_lat must be positive, got {sigma_lat}")

    coords = spherical_coordinate_channels(width, height)
    values = _latitude_prior(coords.latitude, sigma_lat)

    for spot in hotspots or ():
        if not spot.sigma > 0:
            raise ArgumentError(f"Hotspot sigma must be positive, got {spot.sigma}")

        distance = great_circle_distance(coords.latitude, coords.longitude, spot.latitude, spot.longitude)
        values = values + spot.amplitude * np.exp(-(distance**2) / (2 * spot.sigma**2))

    values = np.nan_to_num(values, nan=0.0, posinf=np.finfo(np.float64).max, neginf=0.0)

    return SaliencyMap(values=np.clip(values, 0.0, None))


def fixation_density(fix: FixationMap, sigma_px: float) -> SaliencyMap:
    """
    Blur a fixation map into a continuous density. Wraps around in longitude, clamps at the poles
    """
    if not sigma_px > 0:
        raise ArgumentError(f"sigma_px must be positive, got {sigma_px}")

    density = ndimage.gaussian_filter(fix.mask.astype(np.float64), sigma=sigma_px, mode=("nearest", "wrap"))

    return SaliencyMap(values=np.clip(density, 0.0, None))


def equator_refine(s: SaliencyMap, sigma_lat: float, strength: float = 1.0) -> SaliencyMap:
    """
    Re-weight a predicted map towards the equator: `s * ((1 - strength) + strength * prior(latitude))`
    """
    if not 0.0 <= strength <= 1.0:
        raise ArgumentError(f"strength must be within [0, 1], got {strength}")

    if not sigma_lat > 0:
        raise ArgumentError(f"sigma_lat must be positive, got {sigma_lat}")

    if strength == 0.0:
        return s

    coords = spherical_coordinate_channels(s.width, s.height)
    gain = (1.0 - strength) + strength * _latitude_prior(coords.latitude, sigma_lat)

    return s.with_values(s.values * gain)
