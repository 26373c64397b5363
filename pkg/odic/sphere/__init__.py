from odic.sphere.api import (
    erp_pixel_to_spherical,
    great_circle_distance,
    latitude_weight_map,
    spherical_coordinate_channels,
    spherical_to_erp_pixel,
)
from odic.sphere.cubemap import cubemap_to_erp, erp_to_cubemap, face_pixel_directions
from odic.sphere.typing import FACE_ORDER, CubeFace, CubeFaceSet, LatitudeWeights, SphericalCoordChannels

__all__ = (
    "erp_pixel_to_spherical",
    "great_circle_distance",
    "latitude_weight_map",
    "spherical_coordinate_channels",
    "spherical_to_erp_pixel",
    "cubemap_to_erp",
    "erp_to_cubemap",
    "face_pixel_directions",
    "FACE_ORDER",
    "CubeFace",
    "CubeFaceSet",
    "LatitudeWeights",
    "SphericalCoordChannels",
)
