"""
Container format

All integers are little-endian:

    magic "ODIC" | version u8 | flags u8 | width u32 | height u32 | channels u8 | lambda_index u8 |
    alpha f32 | mask_len u32 | mask bytes | payload_len u32 | payload bytes

Flag bit 0 marks saliency mode; the mask bytes are present exactly when it is set. Headers describing more than
`MAX_PIXELS` pixels (or a side longer than `MAX_SIDE`) are rejected before anything is allocated.
"""

import math
import struct
from dataclasses import dataclass

from odic.codec.exceptions import (
    BadMagicError,
    CorruptHeaderError,
    TruncatedPayloadError,
    UnsupportedVersionError,
)
from odic.losses import bits_per_pixel

MAGIC = b"ODIC"
VERSION = 1

FLAG_SALIENCY = 0x01
KNOWN_FLAGS = FLAG_SALIENCY

_HEADER = struct.Struct("<4sBBIIBBfI")
_LENGTH = struct.Struct("<I")

HEADER_SIZE = _HEADER.size

# a 16K x 8K panorama
MAX_PIXELS = 1 << 27
MAX_SIDE = 1 << 16


@dataclass(frozen=True)
class Bitstream:
    width: int
    height: int
    channels: int
    lambda_index: int
    alpha: float
    saliency_mode: bool
    mask: bytes
    payload: bytes
    version: int = VERSION

    @property
    def flags(self) -> int:
        return FLAG_SALIENCY if self.saliency_mode else 0

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(
            MAGIC,
            self.version,
            self.flags,
            self.width,
            self.height,
            self.channels,
            self.lambda_index,
            self.alpha,
            len(self.mask),
        )

        return b"".join((header, self.mask, _LENGTH.pack(len(self.payload)), self.payload))

    def __len__(self) -> int:
        return HEADER_SIZE + len(self.mask) + _LENGTH.size + len(self.payload)

    @property
    def bpp(self) -> float:
        """
        Bits per pixel over every transmitted byte
        """
        return bits_per_pixel(len(self), self.width, self.height)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Bitstream":
        if len(data) < len(MAGIC) or data[: len(MAGIC)] != MAGIC:
            raise BadMagicError("Data does not start with the ODIC magic")

        if len(data) < HEADER_SIZE:
            raise CorruptHeaderError(f"Header needs {HEADER_SIZE} bytes, got {len(data)}")

        _, version, flags, width, height, channels, lambda_index, alpha, mask_len = _HEADER.unpack_from(data)

        if version != VERSION:
            raise UnsupportedVersionError(f"Bitstream version {version} is not supported (expected {VERSION})")

        if flags & ~KNOWN_FLAGS:
            raise CorruptHeaderError(f"Unknown flag bits 0x{flags:02x}")

        if width == 0 or height == 0:
            raise CorruptHeaderError(f"Image dimensions {width}x{height} are empty")

        if width > MAX_SIDE or height > MAX_SIDE or width * height > MAX_PIXELS:
            raise CorruptHeaderError(f"Image dimensions {width}x{height} exceed the {MAX_PIXELS} pixel limit")

        if channels not in (1, 3):
            raise CorruptHeaderError(f"Channel count must be 1 or 3, got {channels}")

        if not (math.isfinite(alpha) and alpha > 0):
            raise CorruptHeaderError(f"alpha must be a positive number, got {alpha}")

        saliency_mode = bool(flags & FLAG_SALIENCY)

        if saliency_mode != (mask_len > 0):
            raise CorruptHeaderError("Mask length disagrees with the saliency flag")

        mask_end = HEADER_SIZE + mask_len
        payload_start = mask_end + _LENGTH.size

        if len(data) < payload_start:
            raise TruncatedPayloadError(f"Stream ends inside the mask side information ({len(data)} bytes)")

        (payload_len,) = _LENGTH.unpack_from(data, mask_end)
        payload_end = payload_start + payload_len

        if len(data) < payload_end:
            raise TruncatedPayloadError(f"Payload needs {payload_len} bytes, got {len(data) - payload_start}")

        if len(data) > payload_end:
            raise CorruptHeaderError(f"{len(data) - payload_end} trailing bytes after the payload")

        return cls(
            width=width,
            height=height,
            channels=channels,
            lambda_index=lambda_index,
            alpha=alpha,
            saliency_mode=saliency_mode,
            mask=bytes(data[HEADER_SIZE:mask_end]),
            payload=bytes(data[payload_start:payload_end]),
            version=version,
        )
