from odic.codec.ablation import AblationReport, masking_ablation, matched_bpp_gain
from odic.codec.api import (
    channel_steps,
    decode,
    dequantize,
    encode,
    mask_planes,
    quantize,
    rd_sweep,
    residual_ceiling,
    residual_grid,
    step_size,
)
from odic.codec.bitstream import Bitstream
from odic.codec.events import CodecListener, register_codec_listener, unregister_codec_listener
from odic.codec.exceptions import (
    BadMagicError,
    BitstreamError,
    CorruptHeaderError,
    CorruptPayloadError,
    LadderIndexError,
    MissingSaliencyError,
    TruncatedPayloadError,
    UnsupportedVersionError,
)
from odic.codec.transform import analysis, synthesis, zigzag_order
from odic.codec.typing import RdPoint

__all__ = (
    "AblationReport",
    "masking_ablation",
    "matched_bpp_gain",
    "channel_steps",
    "decode",
    "dequantize",
    "encode",
    "mask_planes",
    "quantize",
    "rd_sweep",
    "residual_ceiling",
    "residual_grid",
    "step_size",
    "Bitstream",
    "CodecListener",
    "register_codec_listener",
    "unregister_codec_listener",
    "BadMagicError",
    "BitstreamError",
    "CorruptHeaderError",
    "CorruptPayloadError",
    "LadderIndexError",
    "MissingSaliencyError",
    "TruncatedPayloadError",
    "UnsupportedVersionError",
    "analysis",
    "synthesis",
    "zigzag_order",
    "RdPoint",
)
