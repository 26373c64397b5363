"""
ERP <-> cubemap resampling

Each face is a gnomonic projection with a 90 degree field of view. For face pixel `(row, col)` of an `N x N`
face the tangent-plane coordinates are `a = 2 (col + 0.5) / N - 1` (rightwards) and
`b = 2 (row + 0.5) / N - 1` (downwards); the ray for each face is listed in `_FACE_RAYS`.
"""

import logging
import math
from typing import Callable, Dict, Tuple

import numpy as np
from scipy import ndimage

from odic.exceptions import ArgumentError
from odic.rasters import ErpImage
from odic.sphere.api import spherical_coordinate_channels, spherical_to_erp_pixel
from odic.sphere.typing import FACE_ORDER, CubeFace, CubeFaceSet
from odic.typing import FloatArrayT

logger = logging.getLogger("odic.sphere")

RayT = Tuple[FloatArrayT, FloatArrayT, FloatArrayT]

_FACE_RAYS: Dict[CubeFace, Callable[[FloatArrayT, FloatArrayT], RayT]] = {
    CubeFace.FRONT: lambda a, b: (a, -b, np.ones_like(a)),
    CubeFace.RIGHT: lambda a, b: (np.ones_like(a), -b, -a),
    CubeFace.BACK: lambda a, b: (-a, -b, -np.ones_like(a)),
    CubeFace.LEFT: lambda a, b: (-np.ones_like(a), -b, a),
    CubeFace.TOP: lambda a, b: (a, np.ones_like(a), b),
    CubeFace.BOTTOM: lambda a, b: (a, -np.ones_like(a), -b),
}


def _face_plane(face_size: int) -> Tuple[FloatArrayT, FloatArrayT]:
    centers = 2 * (np.arange(face_size, dtype=np.float64) + 0.5) / face_size - 1
    b, a = np.meshgrid(centers, centers, indexing="ij")

    return a, b


def face_pixel_directions(face: CubeFace, face_size: int) -> Tuple[FloatArrayT, FloatArrayT]:
    """
    `(latitude, longitude)` of the ray through every pixel center of a face
    """
    a, b = _face_plane(face_size)
    x, y, z = _FACE_RAYS[face](a, b)

    latitude = np.arctan2(y, np.hypot(x, z))
    longitude = np.arctan2(x, z)

    return latitude, longitude


def _direction_to_face_plane(face: CubeFace, x: FloatArrayT, y: FloatArrayT, z: FloatArrayT) -> Tuple[
    FloatArrayT, FloatArrayT
]:
    if face is CubeFace.FRONT:
        return x / z, -y / z
    if face is CubeFace.RIGHT:
        return -z / x, -y / x
    if face is CubeFace.BACK:
        return x / z, y / z
    if face is CubeFace.LEFT:
        return -z / x, y / x
    if face is CubeFace.TOP:
        return x / y, z / y

    return -x / y, z / y


def sample_erp(plane: FloatArrayT, u: FloatArrayT, v: FloatArrayT) -> FloatArrayT:
    """
    Bilinear sampling at continuous pixel coordinates, periodic in longitude and clamped in latitude
    """
    # one wrapped column on each side makes the horizontal interpolation cyclic
    padded = np.pad(plane, ((0, 0), (1, 1)), mode="wrap")
    width = plane.shape[1]

    u_wrapped = np.mod(u + 0.5, width) - 0.5 + 1

    return ndimage.map_coordinates(padded, [v, u_wrapped], order=1, mode="nearest")


def _sample_face(plane: FloatArrayT, col: FloatArrayT, row: FloatArrayT) -> FloatArrayT:
    return ndimage.map_coordinates(plane, [row, col], order=1, mode="nearest")


def erp_to_cubemap(img: ErpImage, face_size: int) -> CubeFaceSet:
    if face_size < 2:
        raise ArgumentError(f"face_size must be >= 2, got {face_size}")

    if img.width < 2 or img.height < 2:
        raise ArgumentError(f"ERP image is too small to project: {img.width}x{img.height}")

    if not img.is_canonical:
        logger.warning("Projecting a non-canonical ERP image (%dx%d)", img.width, img.height)

    faces: Dict[CubeFace, FloatArrayT] = {}

    for face in FACE_ORDER:
        latitude, longitude = face_pixel_directions(face, face_size)
        u, v = spherical_to_erp_pixel(latitude, longitude, img.width, img.height)

        faces[face] = np.clip(np.stack([sample_erp(plane, u, v) for plane in img.samples]), 0.0, img.max_value)

    return CubeFaceSet(faces=faces, max_value=img.max_value)


def assign_faces(x: FloatArrayT, y: FloatArrayT, z: FloatArrayT) -> np.ndarray:
    """
    Index into `FACE_ORDER` of the face every direction falls on. Directions on a cube edge go to the
    face listed first
    """
    scores = np.stack([z, x, -z, -x, y, -y])

    return np.argmax(scores, axis=0)


def cubemap_to_erp(faces: CubeFaceSet, width: int, height: int) -> ErpImage:
    if width < 2 or height < 1 or width != 2 * height:
        raise ArgumentError(f"ERP output must satisfy width == 2 * height, got {width}x{height}")

    coords = spherical_coordinate_channels(width, height)
    cos_lat = np.cos(coords.latitude)
    x = cos_lat * np.sin(coords.longitude)
    y = np.sin(coords.latitude)
    z = cos_lat * np.cos(coords.longitude)

    face_index = assign_faces(x, y, z)
    size = faces.face_size
    samples = np.zeros((faces.channels, height, width), dtype=np.float64)

    for index, face in enumerate(FACE_ORDER):
        selected = face_index == index

        if not selected.any():
            continue

        a, b = _direction_to_face_plane(face, x[selected], y[selected], z[selected])
        col = (a + 1) / 2 * size - 0.5
        row = (b + 1) / 2 * size - 0.5

        for channel, plane in enumerate(faces.faces[face]):
            samples[channel][selected] = _sample_face(plane, col, row)

    np.clip(samples, 0.0, faces.max_value, out=samples)

    return ErpImage(samples=samples, max_value=faces.max_value)


def face_center_directions() -> Dict[CubeFace, Tuple[float, float]]:
    """
    Analytic `(latitude, longitude)` of every face center; the poles report longitude 0
    """
    return {
        CubeFace.FRONT: (0.0, 0.0),
        CubeFace.RIGHT: (0.0, math.pi / 2),
        CubeFace.BACK: (0.0, math.pi),
        CubeFace.LEFT: (0.0, -math.pi / 2),
        CubeFace.TOP: (math.pi / 2, 0.0),
        CubeFace.BOTTOM: (-math.pi / 2, 0.0),
    }
