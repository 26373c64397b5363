from odic.saliency.api import (
    apply_latent_mask,
    average_pool,
    downsample_mask,
    ground_truth_weights,
    latent_shape,
    mask_residual,
    rescale_and_sigmoid,
    saliency_residual,
    unmask_latent,
)
from odic.saliency.priors import Hotspot, equator_prior_saliency, equator_refine, fixation_density
from odic.saliency.typing import DownsampledMask, LatentTensor, MaskResidual

__all__ = (
    "apply_latent_mask",
    "average_pool",
    "downsample_mask",
    "ground_truth_weights",
    "latent_shape",
    "mask_residual",
    "rescale_and_sigmoid",
    "saliency_residual",
    "unmask_latent",
    "Hotspot",
    "equator_prior_saliency",
    "equator_refine",
    "fixation_density",
    "DownsampledMask",
    "LatentTensor",
    "MaskResidual",
)
