from dataclasses import dataclass
from enum import Enum
from typing import Dict

import numpy as np

from odic.exceptions import ArgumentError
from odic.typing import FloatArrayT


class CubeFace(str, Enum):
    """
    Cube faces in their fixed priority order. Front looks at +z (longitude 0), right at +x,
    back at -z, left at -x, top at +y (north pole) and bottom at -y
    """

    FRONT = "front"
    RIGHT = "right"
    BACK = "back"
    LEFT = "left"
    TOP = "top"
    BOTTOM = "bottom"


FACE_ORDER = tuple(CubeFace)


@dataclass(frozen=True)
class LatitudeWeights:
    weights: FloatArrayT

    @property
    def height(self) -> int:
        return int(self.weights.shape[0])

    def as_grid(self, width: int) -> FloatArrayT:
        return np.broadcast_to(self.weights[:, np.newaxis], (self.height, width))


@dataclass(frozen=True)
class SphericalCoordChannels:
    latitude: FloatArrayT
    longitude: FloatArrayT

    def stacked(self) -> FloatArrayT:
        """
        The two planes as a `(2, height, width)` array, latitude first
        """
        return np.stack([self.latitude, self.longitude])


@dataclass(frozen=True)
class CubeFaceSet:
    """
    Six square faces, each a planar `(channels, face_size, face_size)` grid
    """

    faces: Dict[CubeFace, FloatArrayT]
    max_value: float = 255.0

    def __post_init__(self) -> None:
        if set(self.faces) != set(CubeFace):
            raise ArgumentError(f"Cube face set needs all six faces, got {sorted(f.value for f in self.faces)}")

        shapes = {face.shape for face in self.faces.values()}

        if len(shapes) != 1:
            raise ArgumentError(f"Cube faces disagree in shape: {sorted(shapes)}")

        (shape,) = shapes

        if len(shape) != 3 or shape[1] != shape[2] or shape[1] < 2:
            raise ArgumentError(f"Cube faces must be square (channels, N, N) grids with N >= 2, got {shape}")

    @property
    def face_size(self) -> int:
        return int(self.faces[CubeFace.FRONT].shape[1])

    @property
    def channels(self) -> int:
        return int(self.faces[CubeFace.FRONT].shape[0])
