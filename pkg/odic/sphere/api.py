"""
ERP coordinate convention

Latitude is positive up and longitude runs from -pi at the left edge to +pi at the right edge. Pixel
centers are used throughout, so pixel `(u, v)` of a `width x height` grid sits at

    latitude  = (0.5 - (v + 0.5) / height) * pi
    longitude = ((u + 0.5) / width) * 2 * pi - pi
"""

import math
from typing import Tuple, Union

import numpy as np

from odic.exceptions import ArgumentError
from odic.sphere.typing import LatitudeWeights, SphericalCoordChannels
from odic.typing import FloatArrayT

NumberT = Union[int, float, np.ndarray]


def _latitude(v: NumberT, height: int) -> NumberT:
    return (0.5 - (v + 0.5) / height) * math.pi


def _longitude(u: NumberT, width: int) -> NumberT:
    return ((u + 0.5) / width) * 2 * math.pi - math.pi


def _check_grid(width: int, height: int) -> None:
    if width < 1 or height < 1:
        raise ArgumentError(f"Grid must be at least 1x1, got {width}x{height}")


def erp_pixel_to_spherical(u: int, v: int, width: int, height: int) -> Tuple[float, float]:
    """
    Map the center of ERP pixel `(u, v)` to `(latitude, longitude)` in radians
    """
    _check_grid(width, height)

    if not (0 <= u < width and 0 <= v < height):
        raise ArgumentError(f"Pixel ({u}, {v}) is outside of a {width}x{height} grid")

    return float(_latitude(float(v), height)), float(_longitude(float(u), width))


def spherical_to_erp_pixel(latitude: FloatArrayT, longitude: FloatArrayT, width: int, height: int) -> Tuple[
    FloatArrayT, FloatArrayT
]:
    """
    Continuous inverse of the pixel-center mapping: returns `(u, v)` pixel coordinates, not rounded
    """
    u = (np.asarray(longitude) + math.pi) / (2 * math.pi) * width - 0.5
    v = (0.5 - np.asarray(latitude) / math.pi) * height - 0.5

    return u, v


def latitude_weight_map(width: int, height: int) -> LatitudeWeights:
    """
    Per-row WS-PSNR weights `w(j) = cos(latitude of the row center)`
    """
    if height < 1:
        raise ArgumentError(f"height must be >= 1, got {height}")

    rows = np.arange(height, dtype=np.float64)
    # |offset| keeps the mirrored rows bit-identical
    offsets = np.abs(rows + 0.5 - height / 2)

    return LatitudeWeights(weights=np.cos(offsets * math.pi / height))


def spherical_coordinate_channels(width: int, height: int) -> SphericalCoordChannels:
    _check_grid(width, height)

    v = np.arange(height, dtype=np.float64)
    u = np.arange(width, dtype=np.float64)

    latitude = np.repeat(_latitude(v, height)[:, np.newaxis], width, axis=1)
    longitude = np.repeat(_longitude(u, width)[np.newaxis, :], height, axis=0)

    return SphericalCoordChannels(latitude=latitude, longitude=longitude)


def great_circle_distance(
    latitude: FloatArrayT, longitude: FloatArrayT, center_latitude: float, center_longitude: float
) -> FloatArrayT:
    """
    Angular distance in radians, haversine form for stability at small angles
    """
    d_lat = latitude - center_latitude
    d_lon = longitude - center_longitude

    h = np.sin(d_lat / 2) ** 2 + np.cos(latitude) * math.cos(center_latitude) * np.sin(d_lon / 2) ** 2

    return 2 * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))
