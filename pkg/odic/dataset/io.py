"""
Raster file IO

Images and saliency maps are read from PNG (8 or 16 bit) or binary PGM/PPM (P5/P6, any maxval up to 65535).
Pillow handles every PNG except 16-bit color, which it would truncate to 8 bits; those go through OpenCV.
Bit depth is preserved: an image keeps its file maxval as `max_value` (65535 for any 16-bit PNG), a saliency
map is normalized to `[0, 1]` by it. The float raster format stores mask residuals:

    magic "ODRF" | width u32 | height u32 | width * height float32 values, row-major

all little-endian.
"""

import logging
import re
import struct
from io import BytesIO
from pathlib import Path
from typing import Tuple

import cv2
import numpy as np
from PIL import Image, UnidentifiedImageError

from odic.dataset.exceptions import ImageDecodeError, UnsupportedFormatError
from odic.rasters import ErpImage, FixationMap, SaliencyMap
from odic.typing import FloatArrayT, PathLikeT

logger = logging.getLogger("odic.dataset")

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
PNM_MAGICS = {b"P5": 1, b"P6": 3}
PNM_SUFFIXES = {".pgm", ".ppm", ".pnm"}

FLOAT_RASTER_MAGIC = b"ODRF"
_FLOAT_RASTER_HEADER = struct.Struct("<4sII")

_PNM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n?)*(\d+)")

_SIXTEEN_BIT_MODES = {"I", "I;16", "I;16B", "I;16L", "I;16N"}

# IHDR follows the signature: length, tag, width, height, bit depth, color type
_PNG_IHDR = struct.Struct(">8sI4sIIBB")
_PNG_COLOR_TYPES = {2, 6}


def _read_bytes(path: PathLikeT) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise ImageDecodeError(f"Cannot read {path}: {e}") from e


def _decode_pnm(data: bytes, source: str) -> Tuple[np.ndarray, int]:
    channels = PNM_MAGICS[data[:2]]
    position = 2
    fields = []

    for _ in range(3):
        match = _PNM_TOKEN.match(data, position)

        if match is None:
            raise ImageDecodeError(f"{source}: malformed PNM header")

        fields.append(int(match.group(1)))
        position = match.end()

    width, height, maxval = fields

    if position >= len(data) or not data[position : position + 1].isspace():
        raise ImageDecodeError(f"{source}: PNM header is not followed by a whitespace byte")

    position += 1

    if width == 0 or height == 0:
        raise ImageDecodeError(f"{source}: image has zero dimensions")

    if not 0 < maxval <= 0xFFFF:
        raise ImageDecodeError(f"{source}: PNM maxval {maxval} is out of range")

    dtype = np.dtype(">u2") if maxval > 0xFF else np.dtype("u1")
    expected = width * height * channels * dtype.itemsize

    if len(data) - position < expected:
        raise ImageDecodeError(f"{source}: truncated PNM data, {len(data) - position} of {expected} bytes")

    pixels = np.frombuffer(data, dtype=dtype, count=width * height * channels, offset=position)

    return pixels.reshape(height, width, channels).transpose(2, 0, 1), maxval


def _is_deep_color_png(data: bytes) -> bool:
    if len(data) < _PNG_IHDR.size:
        return False

    _, _, tag, _, _, depth, color_type = _PNG_IHDR.unpack_from(data)

    return tag == b"IHDR" and depth == 16 and color_type in _PNG_COLOR_TYPES


def _decode_deep_color_png(data: bytes, source: str) -> Tuple[np.ndarray, int]:
    try:
        pixels = cv2.imdecode(np.frombuffer(data, dtype=np.uint8), cv2.IMREAD_UNCHANGED)
    except cv2.error as e:
        raise ImageDecodeError(f"{source}: cannot decode PNG: {e}") from e

    if pixels is None or pixels.dtype != np.uint16 or pixels.ndim != 3:
        raise ImageDecodeError(f"{source}: cannot decode 16-bit color PNG")

    # BGR or BGRA, alpha is dropped
    return pixels[..., 2::-1].transpose(2, 0, 1).astype(np.int64), 0xFFFF


def _decode_png(data: bytes, source: str) -> Tuple[np.ndarray, int]:
    if _is_deep_color_png(data):
        return _decode_deep_color_png(data, source)

    try:
        with Image.open(BytesIO(data)) as png:
            png.load()

            if png.mode in _SIXTEEN_BIT_MODES:
                pixels = np.asarray(png, dtype=np.int64)[np.newaxis]
                return pixels, 0xFFFF

            if png.mode in ("L", "LA"):
                pixels = np.asarray(png.convert("L"))[np.newaxis]
            else:
                pixels = np.asarray(png.convert("RGB")).transpose(2, 0, 1)
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as e:
        raise ImageDecodeError(f"{source}: cannot decode PNG: {e}") from e

    return pixels, 0xFF


def decode_raster(data: bytes, source: str = "<bytes>") -> Tuple[np.ndarray, int]:
    """
    Decode PNG or binary PNM bytes into planar `(channels, height, width)` integers and the peak value
    """
    if data.startswith(PNG_SIGNATURE):
        pixels, maxval = _decode_png(data, source)
    elif data[:2] in PNM_MAGICS:
        pixels, maxval = _decode_pnm(data, source)
    else:
        raise UnsupportedFormatError(f"{source}: not a PNG or binary PGM/PPM file")

    if pixels.shape[1] == 0 or pixels.shape[2] == 0:
        raise ImageDecodeError(f"{source}: image has zero dimensions")

    if pixels.max() > maxval:
        raise ImageDecodeError(f"{source}: samples exceed the declared maximum {maxval}")

    return pixels, maxval


def load_image(path: PathLikeT) -> ErpImage:
    pixels, maxval = decode_raster(_read_bytes(path), str(path))

    channels, height, width = pixels.shape
    logger.debug("Loaded %s: %d channel(s), %dx%d, peak %d", path, channels, width, height, maxval)

    return ErpImage(samples=pixels.astype(np.float64), max_value=float(maxval))


def load_saliency(path: PathLikeT) -> SaliencyMap:
    """
    Grayscale saliency normalized to `[0, 1]`; color files are averaged over channels
    """
    pixels, maxval = decode_raster(_read_bytes(path), str(path))

    return SaliencyMap(values=pixels.astype(np.float64).mean(axis=0) / maxval)


def load_fixations(path: PathLikeT) -> FixationMap:
    """
    Any non-zero sample marks a fixation
    """
    pixels, _ = decode_raster(_read_bytes(path), str(path))

    return FixationMap(mask=pixels.max(axis=0) > 0)


def _encode_pnm(pixels: np.ndarray, maxval: int) -> bytes:
    channels, height, width = pixels.shape
    magic = b"P5" if channels == 1 else b"P6"
    dtype = ">u2" if maxval > 0xFF else "u1"
    header = b"%s\n%d %d\n%d\n" % (magic, width, height, maxval)

    return header + pixels.transpose(1, 2, 0).astype(dtype).tobytes()


def _encode_deep_color_png(pixels: np.ndarray, target: Path) -> bytes:
    bgr = np.ascontiguousarray(pixels[::-1].transpose(1, 2, 0).astype(np.uint16))
    ok, encoded = cv2.imencode(".png", bgr)

    if not ok:
        raise UnsupportedFormatError(f"{target}: OpenCV could not encode a 16-bit color PNG")

    return encoded.tobytes()


def _encode_png(pixels: np.ndarray, maxval: int, target: Path) -> bytes:
    channels = pixels.shape[0]

    if maxval > 0xFF and channels != 1:
        return _encode_deep_color_png(pixels, target)

    if maxval > 0xFF:
        png = Image.fromarray(pixels[0].astype(np.uint16))
    elif channels == 1:
        png = Image.fromarray(pixels[0].astype(np.uint8))
    else:
        png = Image.fromarray(pixels.transpose(1, 2, 0).astype(np.uint8))

    buffer = BytesIO()
    png.save(buffer, format="PNG")

    return buffer.getvalue()


def encode_raster(pixels: np.ndarray, maxval: int, target: PathLikeT) -> bytes:
    """
    Encode planar integer samples for the format implied by the target suffix
    """
    target = Path(target)
    suffix = target.suffix.lower()

    if suffix == ".png":
        return _encode_png(pixels, maxval, target)

    if suffix in PNM_SUFFIXES:
        return _encode_pnm(pixels, maxval)

    raise UnsupportedFormatError(f"{target}: unknown image suffix {suffix!r}, use .png, .pgm or .ppm")


def _write_bytes(path: PathLikeT, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as e:
        raise ImageDecodeError(f"Cannot write {path}: {e}") from e


def _integer_peak(max_value: float) -> int:
    peak = int(round(max_value))

    if not 0 < peak <= 0xFFFF:
        raise UnsupportedFormatError(f"Peak value {max_value} can't be stored in an 8 or 16-bit file")

    return peak


def save_image(img: ErpImage, path: PathLikeT) -> None:
    peak = _integer_peak(img.max_value)
    pixels = np.clip(np.rint(img.samples), 0, peak).astype(np.int64)

    _write_bytes(path, encode_raster(pixels, peak, path))


def save_saliency(s: SaliencyMap, path: PathLikeT, bit_depth: int = 16) -> None:
    """
    Write a grayscale saliency map, values above 1 are normalized by the map maximum first
    """
    if bit_depth not in (8, 16):
        raise UnsupportedFormatError(f"Saliency maps are written with 8 or 16 bits, got {bit_depth}")

    peak = (1 << bit_depth) - 1
    values = s.values
    top = values.max()

    if top > 1:
        logger.warning("Saliency map peaks at %s, normalizing to [0, 1] before writing %s", top, path)
        values = values / top

    pixels = np.rint(values * peak).astype(np.int64)[np.newaxis]

    _write_bytes(path, encode_raster(pixels, peak, path))


def save_float_raster(values: FloatArrayT, path: PathLikeT) -> None:
    grid = np.asarray(values, dtype=np.float64)

    if grid.ndim != 2:
        raise UnsupportedFormatError(f"Float rasters are 2-D, got shape {grid.shape}")

    height, width = grid.shape
    header = _FLOAT_RASTER_HEADER.pack(FLOAT_RASTER_MAGIC, width, height)

    _write_bytes(path, header + grid.astype("<f4").tobytes())


def load_float_raster(path: PathLikeT) -> FloatArrayT:
    data = _read_bytes(path)

    if len(data) < _FLOAT_RASTER_HEADER.size or data[:4] != FLOAT_RASTER_MAGIC:
        raise UnsupportedFormatError(f"{path}: not an ODRF float raster")

    _, width, height = _FLOAT_RASTER_HEADER.unpack_from(data)
    expected = width * height * 4
    available = len(data) - _FLOAT_RASTER_HEADER.size

    if available != expected:
        raise ImageDecodeError(f"{path}: float raster holds {available} of {expected} bytes")

    values = np.frombuffer(data, dtype="<f4", offset=_FLOAT_RASTER_HEADER.size)

    return values.reshape(height, width).astype(np.float64)
