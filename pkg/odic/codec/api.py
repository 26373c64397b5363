"""
Reference codec: block DCT analysis, saliency driven latent masking, uniform quantization with a
lambda-indexed step and adaptive range coding

The saliency map is only needed by the encoder. The decoder reads the 4-bit mask residual grid from
the side information and undoes the masking before synthesis.

Masked channels are amplified by the residual and then quantized with the ladder step times the residual
ceiling, so rate moves out of the cells whose saliency does not saturate while the saturated ones are
coded exactly as without masking. Preserved channels always use the plain ladder step.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from odic.codec.bitstream import MAX_PIXELS, MAX_SIDE, Bitstream
from odic.codec.events import _CODEC_LISTENERS, CodecListener
from odic.codec.exceptions import CorruptHeaderError, LadderIndexError, MissingSaliencyError
from odic.codec.models import decode_latent, decode_symbols, encode_latent, encode_symbols
from odic.codec.transform import analysis, latent_grid, plane_channels, synthesis
from odic.codec.typing import RdPoint
from odic.config import CodecConfig, QualityConfig, Settings, load_settings
from odic.events import EventDispatcher
from odic.exceptions import ArgumentError
from odic.metrics import MetricId, evaluate
from odic.rasters import ErpImage, SaliencyMap, check_spatial_match
from odic.saliency import (
    DownsampledMask,
    LatentTensor,
    MaskResidual,
    apply_latent_mask,
    downsample_mask,
    mask_residual,
    rescale_and_sigmoid,
    unmask_latent,
)
from odic.typing import FloatArrayT, IntArrayT

logger = logging.getLogger("odic.codec")

CODEC_PEAK = 255.0

MASK_LEVELS = 16
MONOTONE_TOLERANCE = 1e-6

_DEFAULT_CONFIG = CodecConfig()
_DEFAULT_QUALITY = QualityConfig()


def step_size(lambda_: float, cfg: CodecConfig = _DEFAULT_CONFIG) -> float:
    """
    Quantizer step `base_step_constant / sqrt(lambda)`
    """
    if not (math.isfinite(lambda_) and lambda_ > 0):
        raise LadderIndexError(f"lambda must be a positive number, got {lambda_}")

    return cfg.base_step_constant / math.sqrt(lambda_)


def quantize(y: LatentTensor, step: Union[float, FloatArrayT]) -> IntArrayT:
    """
    Uniform mid-tread quantizer, `step` is a scalar or broadcasts against the `(C, h, w)` coefficients
    """
    return np.rint(y.coefficients / step).astype(np.int64)


def dequantize(q: IntArrayT, step: Union[float, FloatArrayT]) -> LatentTensor:
    return LatentTensor(coefficients=q.astype(np.float64) * step)


def _lambda_for(lambda_index: int, cfg: CodecConfig) -> float:
    if not 0 <= lambda_index < len(cfg.lambda_ladder):
        raise LadderIndexError(
            f"lambda index {lambda_index} is outside the ladder of {len(cfg.lambda_ladder)} entries"
        )

    return cfg.lambda_ladder[lambda_index]


def _header_alpha(alpha: float) -> float:
    return float(np.float32(alpha))


def _mask_indices(saliency: SaliencyMap, cfg: CodecConfig) -> IntArrayT:
    mask = downsample_mask(rescale_and_sigmoid(saliency), cfg.block_size)

    return np.clip(np.rint(mask.values * (MASK_LEVELS - 1)), 0, MASK_LEVELS - 1).astype(np.int64)


def _residual_from_indices(indices: IntArrayT, alpha: float) -> MaskResidual:
    return mask_residual(DownsampledMask(values=indices / (MASK_LEVELS - 1)), alpha)


def _planes(y: LatentTensor, cfg: CodecConfig) -> List[LatentTensor]:
    per_plane = plane_channels(cfg)

    return [
        LatentTensor(coefficients=y.coefficients[start : start + per_plane])
        for start in range(0, y.channels, per_plane)
    ]


def mask_planes(y: LatentTensor, r: MaskResidual, cfg: CodecConfig, inverse: bool = False) -> LatentTensor:
    """
    Latent masking applied to every color plane, each plane keeping its first zigzag channels
    """
    operation = unmask_latent if inverse else apply_latent_mask
    split = cfg.preserved_per_plane()
    planes = [operation(plane, r, split).coefficients for plane in _planes(y, cfg)]

    return LatentTensor(coefficients=np.concatenate(planes, axis=0))


def _dc_channels(channels: int, cfg: CodecConfig) -> Tuple[int, ...]:
    return tuple(range(0, channels, plane_channels(cfg)))


def residual_ceiling(alpha: float) -> float:
    """
    Residual of a fully salient cell, `(1 + alpha) / alpha`
    """
    return (1.0 + alpha) / alpha


def channel_steps(
    channels: int, lambda_: float, cfg: CodecConfig = _DEFAULT_CONFIG, alpha: Optional[float] = None
) -> FloatArrayT:
    """
    Quantizer step per latent channel, shaped `(C, 1, 1)`

    Without `alpha` every channel uses the ladder step. With it, masked channels use the ladder step times
    the residual ceiling: a cell whose mask saturates is quantized exactly like the unmasked codec and
    every less salient cell ends up with a proportionally coarser effective step.
    """
    steps = np.full(channels, step_size(lambda_, cfg))

    if alpha is not None:
        per_plane = plane_channels(cfg)
        split = cfg.preserved_per_plane()

        for start in range(0, channels, per_plane):
            steps[start + split : start + per_plane] *= residual_ceiling(alpha)

    return steps[:, np.newaxis, np.newaxis]


def _to_codec_range(img: ErpImage) -> ErpImage:
    if img.max_value == CODEC_PEAK:
        return img

    logger.debug("Rescaling samples from peak %s to %s", img.max_value, CODEC_PEAK)

    samples = np.clip(img.samples * (CODEC_PEAK / img.max_value), 0.0, CODEC_PEAK)

    return ErpImage(samples=samples, max_value=CODEC_PEAK)


def encode(
    img: ErpImage,
    saliency: Optional[SaliencyMap],
    lambda_index: int,
    cfg: CodecConfig = _DEFAULT_CONFIG,
    listeners: Optional[Sequence[CodecListener]] = None,
) -> Bitstream:
    """
    Compress an ERP image at one operating point of the lambda ladder

    **Parameters:**

    * **img** - image to compress, samples are brought to the 8-bit range first
    * **saliency** - raw saliency map, required when `cfg.saliency_mode` is on
    * **lambda_index** - position in `cfg.lambda_ladder`
    * **cfg** - codec configuration, the decoder needs the same one
    * **listeners** - local listeners notified once the bitstream is ready
    """
    lambda_ = _lambda_for(lambda_index, cfg)

    if img.width > MAX_SIDE or img.height > MAX_SIDE or img.width * img.height > MAX_PIXELS:
        raise ArgumentError(f"{img.width}x{img.height} exceeds the {MAX_PIXELS} pixel limit of the bitstream")

    img = _to_codec_range(img)
    y = analysis(img, cfg)
    alpha = _header_alpha(cfg.alpha)
    mask = b""

    if cfg.saliency_mode:
        if saliency is None:
            raise MissingSaliencyError("Saliency mode is on but no saliency map was given")

        check_spatial_match(img.height, img.width, saliency.height, saliency.width, "saliency map")

        indices = _mask_indices(saliency, cfg)
        y = mask_planes(y, _residual_from_indices(indices, alpha), cfg)
        mask = encode_symbols(indices.ravel().tolist(), MASK_LEVELS)

    q = quantize(y, channel_steps(y.channels, lambda_, cfg, alpha if cfg.saliency_mode else None))
    payload = encode_latent(q, _dc_channels(q.shape[0], cfg), cfg.escape_threshold)

    bitstream = Bitstream(
        width=img.width,
        height=img.height,
        channels=img.channels,
        lambda_index=lambda_index,
        alpha=alpha,
        saliency_mode=cfg.saliency_mode,
        mask=mask,
        payload=payload,
    )

    logger.debug(
        "Encoded %dx%d at lambda %s: %d bytes (%d mask, %d payload), %.4f bpp",
        img.width,
        img.height,
        lambda_,
        len(bitstream),
        len(mask),
        len(payload),
        bitstream.bpp,
    )

    EventDispatcher(listeners, _CODEC_LISTENERS).as_listener.on_encoded(bitstream)

    return bitstream


def decode(
    bs: Union[Bitstream, bytes],
    cfg: CodecConfig = _DEFAULT_CONFIG,
    listeners: Optional[Sequence[CodecListener]] = None,
) -> ErpImage:
    """
    Reconstruct an image from a bitstream (or its serialized bytes) with the encoder's configuration
    """
    if not isinstance(bs, Bitstream):
        bs = Bitstream.from_bytes(bytes(bs))

    if not 0 <= bs.lambda_index < len(cfg.lambda_ladder):
        raise CorruptHeaderError(
            f"lambda index {bs.lambda_index} is outside the ladder of {len(cfg.lambda_ladder)} entries"
        )

    h, w = latent_grid(bs.width, bs.height, cfg.block_size)
    channels = bs.channels * plane_channels(cfg)
    steps = channel_steps(channels, cfg.lambda_ladder[bs.lambda_index], cfg, bs.alpha if bs.saliency_mode else None)

    q = decode_latent(bs.payload, (channels, h, w), _dc_channels(channels, cfg), cfg.escape_threshold)
    y = dequantize(q, steps)

    if bs.saliency_mode:
        indices = np.array(decode_symbols(bs.mask, h * w, MASK_LEVELS), dtype=np.int64).reshape(h, w)
        y = mask_planes(y, _residual_from_indices(indices, bs.alpha), cfg, inverse=True)

    image = synthesis(y, cfg, bs.width, bs.height, max_value=CODEC_PEAK)

    EventDispatcher(listeners, _CODEC_LISTENERS).as_listener.on_decoded(bs, image)

    return image


def _rd_point(
    img: ErpImage,
    saliency: Optional[SaliencyMap],
    lambda_index: int,
    cfg: CodecConfig,
    quality: QualityConfig,
    image_name: Optional[str],
) -> RdPoint:
    bitstream = encode(img, saliency, lambda_index, cfg)
    reconstruction = decode(bitstream, cfg)
    scores = evaluate(_to_codec_range(img), reconstruction, saliency, quality)

    return RdPoint(
        lambda_index=lambda_index,
        lambda_=cfg.lambda_ladder[lambda_index],
        bpp=bitstream.bpp,
        ws_psnr=scores[MetricId.WS_PSNR].value,
        sal_psnr=scores[MetricId.SAL_PSNR].value,
        ws_ssim=scores[MetricId.WS_SSIM].value,
        image=image_name,
    )


def _check_monotone(points: Sequence[RdPoint], image_name: Optional[str]) -> None:
    for prev, nxt in zip(points, points[1:]):
        if nxt.bpp < prev.bpp - MONOTONE_TOLERANCE:
            logger.warning(
                "bpp drops from %.6f to %.6f between lambda indices %d and %d (%s)",
                prev.bpp,
                nxt.bpp,
                prev.lambda_index,
                nxt.lambda_index,
                image_name or "unnamed image",
            )


def rd_sweep(
    img: ErpImage,
    saliency: Optional[SaliencyMap],
    cfg: CodecConfig = _DEFAULT_CONFIG,
    quality: QualityConfig = _DEFAULT_QUALITY,
    image_name: Optional[str] = None,
    settings: Optional[Settings] = None,
    listeners: Optional[Sequence[CodecListener]] = None,
) -> List[RdPoint]:
    """
    Encode and decode at every ladder entry, one `RdPoint` per entry in ladder order

    Without a saliency map SAL-PSNR is computed with a constant map. Worker threads come from
    `settings.threads` (or `ODIC_THREADS`) and never change the results.
    """
    if cfg.saliency_mode and saliency is None:
        raise MissingSaliencyError("Saliency mode is on but no saliency map was given")

    settings = settings or load_settings()
    indices = range(len(cfg.lambda_ladder))

    def sweep_point(lambda_index: int) -> RdPoint:
        return _rd_point(img, saliency, lambda_index, cfg, quality, image_name)

    dispatcher = EventDispatcher(listeners, _CODEC_LISTENERS).as_listener
    points: List[RdPoint] = []

    with ThreadPoolExecutor(max_workers=settings.threads) as executor:
        for point in executor.map(sweep_point, indices):
            points.append(point)
            dispatcher.on_rd_point(point)

    _check_monotone(points, image_name)

    return points


def residual_grid(saliency: SaliencyMap, cfg: CodecConfig = _DEFAULT_CONFIG) -> FloatArrayT:
    """
    The mask residual exactly as the decoder will see it after 4-bit quantization
    """
    return _residual_from_indices(_mask_indices(saliency, cfg), _header_alpha(cfg.alpha)).values
