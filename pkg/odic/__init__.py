import importlib
from typing import TYPE_CHECKING, Any

__version__ = "0.1.0"

# public name -> (module path, attribute)
_IMPORT_MAP = {
    "ErpImage": ("odic.rasters", "ErpImage"),
    "SaliencyMap": ("odic.rasters", "SaliencyMap"),
    "FixationMap": ("odic.rasters", "FixationMap"),
    "CodecConfig": ("odic.config", "CodecConfig"),
    "load_config": ("odic.config", "load_config"),
    "OdicError": ("odic.exceptions", "OdicError"),
    "encode": ("odic.codec.api", "encode"),
    "decode": ("odic.codec.api", "decode"),
    "rd_sweep": ("odic.codec.api", "rd_sweep"),
    "ws_psnr": ("odic.metrics.quality", "ws_psnr"),
    "sal_psnr": ("odic.metrics.quality", "sal_psnr"),
    "ws_ssim": ("odic.metrics.quality", "ws_ssim"),
    "bd_analysis": ("odic.bjontegaard.api", "bd_analysis"),
}

if TYPE_CHECKING:
    from odic.bjontegaard.api import bd_analysis
    from odic.codec.api import decode, encode, rd_sweep
    from odic.config import CodecConfig, load_config
    from odic.exceptions import OdicError
    from odic.metrics.quality import sal_psnr, ws_psnr, ws_ssim
    from odic.rasters import ErpImage, FixationMap, SaliencyMap


def __getattr__(name: str) -> Any:
    if name in _IMPORT_MAP:
        module_path, attr_name = _IMPORT_MAP[name]
        module = importlib.import_module(module_path)
        return getattr(module, attr_name)

    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = ["__version__", *_IMPORT_MAP.keys()]
