"""
Fixed analysis/synthesis transform

Every color plane is padded (half-sample symmetric) to a multiple of the block size and split into blocks.
Each block gets an orthonormal 2-D DCT; coefficient `k` (in zigzag order, lowest frequency first) of all
blocks forms one latent channel. Planes are concatenated, so a 3-plane image with 16x16 blocks yields
768 channels on a `ceil(H/16) x ceil(W/16)` grid.
"""

import functools
import math

import numpy as np
from scipy import fft

from odic.config import CodecConfig
from odic.exceptions import ArgumentError
from odic.rasters import ErpImage
from odic.saliency import LatentTensor
from odic.typing import IntArrayT


@functools.lru_cache(maxsize=8)
def zigzag_order(block_size: int) -> IntArrayT:
    """
    Flat (row-major) coefficient indices in zigzag order
    """
    cells = [(row, col) for row in range(block_size) for col in range(block_size)]
    cells.sort(key=lambda cell: (cell[0] + cell[1], cell[0] if (cell[0] + cell[1]) % 2 else -cell[0]))

    order = np.array([row * block_size + col for row, col in cells], dtype=np.int64)
    order.setflags(write=False)

    return order


def latent_grid(width: int, height: int, block_size: int) -> tuple[int, int]:
    return math.ceil(height / block_size), math.ceil(width / block_size)


def analysis(img: ErpImage, cfg: CodecConfig) -> LatentTensor:
    block = cfg.block_size
    planes = img.channels

    if img.width < 1 or img.height < 1:
        raise ArgumentError("Cannot transform an empty image")

    h, w = latent_grid(img.width, img.height, block)
    padded = np.pad(
        img.samples,
        ((0, 0), (0, h * block - img.height), (0, w * block - img.width)),
        mode="symmetric",
    )

    blocks = padded.reshape(planes, h, block, w, block).transpose(0, 2, 4, 1, 3)
    coefficients = fft.dctn(blocks, type=2, axes=(1, 2), norm="ortho")
    coefficients = coefficients.reshape(planes, block * block, h, w)[:, zigzag_order(block)]

    return LatentTensor(coefficients=coefficients.reshape(planes * block * block, h, w))


def synthesis(
    y: LatentTensor, cfg: CodecConfig, width: int, height: int, max_value: float = 255.0
) -> ErpImage:
    block = cfg.block_size
    per_plane = block * block
    h, w = latent_grid(width, height, block)

    if y.channels % per_plane or y.channels // per_plane not in (1, 3) or (y.h, y.w) != (h, w):
        raise ArgumentError(
            f"Latent of shape {y.coefficients.shape} does not fit a {width}x{height} image with {block}px blocks"
        )

    planes = y.channels // per_plane
    coefficients = np.empty((planes, per_plane, h, w), dtype=np.float64)
    coefficients[:, zigzag_order(block)] = y.coefficients.reshape(planes, per_plane, h, w)

    blocks = fft.idctn(coefficients.reshape(planes, block, block, h, w), type=2, axes=(1, 2), norm="ortho")
    samples = blocks.transpose(0, 3, 1, 4, 2).reshape(planes, h * block, w * block)[:, :height, :width]

    return ErpImage(samples=np.clip(samples, 0.0, max_value), max_value=max_value)


def plane_channels(cfg: CodecConfig) -> int:
    return cfg.block_size * cfg.block_size
