"""
Configuration models

Every knob that changes a numerical result lives in one of the models below, so a YAML file plus the CLI
flags fully describe a run. `Settings` only carries hints that never affect outputs.
"""

import os
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from odic.exceptions import ConfigError
from odic.typing import PathLikeT

LAMBDA_LADDER: Tuple[float, ...] = (0.0018, 0.0035, 0.0067, 0.013, 0.025, 0.0483, 0.0932, 0.18)

THREADS_ENV = "ODIC_THREADS"

# the bitstream stores the lambda index in one byte
MAX_LADDER_LENGTH = 256


class CodecConfig(BaseModel):
    """
    Reference codec configuration

    **Fields:**

    * **block_size** - DCT block size in pixels, also the latent downsampling factor
    * **preserved_fraction** - share of each plane's zigzag channels excluded from latent masking
    * **lambda_ladder** - ordered Lagrange multipliers indexing the operating points
    * **alpha** - mask residual offset, residual = (mask + alpha) / alpha
    * **saliency_mode** - apply latent masking (requires a saliency map at encode time)
    * **base_step_constant** - quantizer step is `base_step_constant / sqrt(lambda)`. The default is not tuned to
      a corpus, so the rate at each ladder entry depends on content: the noise-textured synthetic scenes of the
      test suite code at 2 to 4 bpp at `lambda = 0.18`, smooth content far below 1 bpp. Calibrate it per corpus
      when the ladder must span a given rate range, encoder and decoder need the same value
    * **escape_threshold** - magnitudes at or above it leave the adaptive alphabet
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    block_size: int = Field(default=16, ge=2, le=64)
    preserved_fraction: float = Field(default=0.25, ge=0.0, le=1.0)
    lambda_ladder: Tuple[float, ...] = Field(default=LAMBDA_LADDER, max_length=MAX_LADDER_LENGTH)
    alpha: float = Field(default=1.0, gt=0.0)
    saliency_mode: bool = True
    base_step_constant: float = Field(default=3.4, gt=0.0)
    escape_threshold: int = Field(default=16, ge=2, le=256)

    @field_validator("lambda_ladder")
    @classmethod
    def _ladder_increasing(cls, ladder: Tuple[float, ...]) -> Tuple[float, ...]:
        if not ladder:
            raise ValueError("lambda_ladder must not be empty")

        if any(value <= 0 for value in ladder):
            raise ValueError("lambda_ladder values must be positive")

        if any(nxt <= prev for prev, nxt in zip(ladder, ladder[1:])):
            raise ValueError("lambda_ladder must be strictly increasing")

        return ladder

    def preserved_per_plane(self) -> int:
        return round(self.preserved_fraction * self.block_size**2)


class SalPsnrCombination(str, Enum):
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive"


class QualityConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    sal_psnr_combination: SalPsnrCombination = SalPsnrCombination.MULTIPLICATIVE
    saliency_floor: float = Field(default=0.01, ge=0.0)
    psnr_cap_db: float = Field(default=99.0, gt=0.0)


class KldDirection(str, Enum):
    GT_PRED = "gt_pred"
    PRED_GT = "pred_gt"


class SaliencyMetricsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kld_epsilon: float = Field(default=1e-7, gt=0.0)
    kld_direction: KldDirection = KldDirection.GT_PRED


class OdicConfig(BaseModel):
    """
    Root of a YAML config file, every section is optional
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    codec: CodecConfig = Field(default_factory=CodecConfig)
    quality: QualityConfig = Field(default_factory=QualityConfig)
    saliency_metrics: SaliencyMetricsConfig = Field(default_factory=SaliencyMetricsConfig)


class Settings(BaseModel):
    """
    Runtime hints read from the environment
    """

    model_config = ConfigDict(frozen=True)

    threads: int = Field(default=1, ge=1, le=256)


def load_config(path: Optional[PathLikeT] = None) -> OdicConfig:
    """
    Load a YAML config file. No path means the defaults
    """
    if path is None:
        return OdicConfig()

    config_path = Path(path)

    if not config_path.is_file():
        raise ConfigError(f"Config file not found: {config_path}")

    try:
        with config_path.open("r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Config file {config_path} is not valid YAML: {e}") from e

    if not isinstance(raw, dict):
        raise ConfigError(f"Config file {config_path} must contain a mapping at the top level")

    try:
        return OdicConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"Invalid config {config_path}:\n{e}") from e


def load_settings() -> Settings:
    raw_threads = os.environ.get(THREADS_ENV)

    if raw_threads is None or raw_threads.strip() == "":
        return Settings()

    try:
        return Settings(threads=int(raw_threads))
    except (ValueError, ValidationError) as e:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw_threads!r}") from e
