from odic.dataset.augment import (
    AugmentedPair,
    CropMode,
    CropResult,
    CropShape,
    augment_pair,
    derive_seed,
    hflip,
    random_crop,
    resize,
    resize_saliency,
    rotate_longitude,
    vmirror,
)
from odic.dataset.exceptions import ImageDecodeError, ManifestError, UnsupportedFormatError
from odic.dataset.io import (
    load_fixations,
    load_float_raster,
    load_image,
    load_saliency,
    save_float_raster,
    save_image,
    save_saliency,
)
from odic.dataset.manifest import CorpusManifest, CorpusRecord, ManifestRecord, load_manifest, load_record

__all__ = (
    "AugmentedPair",
    "CropMode",
    "CropResult",
    "CropShape",
    "augment_pair",
    "derive_seed",
    "hflip",
    "random_crop",
    "resize",
    "resize_saliency",
    "rotate_longitude",
    "vmirror",
    "ImageDecodeError",
    "ManifestError",
    "UnsupportedFormatError",
    "load_fixations",
    "load_float_raster",
    "load_image",
    "load_saliency",
    "save_float_raster",
    "save_image",
    "save_saliency",
    "CorpusManifest",
    "CorpusRecord",
    "ManifestRecord",
    "load_manifest",
    "load_record",
)
