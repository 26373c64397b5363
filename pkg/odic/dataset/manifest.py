"""
Corpus manifests

One record per line, tab separated:

    image <TAB> saliency [<TAB> fixations [<TAB> split]]

Blank lines and lines starting with `#` are skipped. `-` (or an empty field) means no fixation file; the
split defaults to `test`. Relative paths are resolved against the manifest's directory.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from odic.dataset.exceptions import ManifestError
from odic.dataset.io import load_fixations, load_image, load_saliency
from odic.rasters import ErpImage, FixationMap, SaliencyMap
from odic.typing import PathLikeT

logger = logging.getLogger("odic.dataset")

FIELD_SEPARATOR = "\t"
NO_FILE = "-"
DEFAULT_SPLIT = "test"


class ManifestRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    image: Path
    saliency: Path
    fixations: Optional[Path] = None
    split: str = Field(default=DEFAULT_SPLIT, min_length=1)

    @property
    def name(self) -> str:
        return self.image.stem


class CorpusManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    records: List[ManifestRecord]
    source: Optional[Path] = None

    def __len__(self) -> int:
        return len(self.records)

    def split(self, tag: str) -> List[ManifestRecord]:
        return [record for record in self.records if record.split == tag]


@dataclass(frozen=True)
class CorpusRecord:
    """
    A manifest record with its rasters loaded
    """

    record: ManifestRecord
    image: ErpImage
    saliency: SaliencyMap
    fixations: Optional[FixationMap] = None


def _resolve(raw: str, root: Path) -> Path:
    path = Path(raw)

    return path if path.is_absolute() else root / path


def parse_manifest(text: str, root: PathLikeT = ".", source: str = "<manifest>") -> CorpusManifest:
    root = Path(root)
    records: List[ManifestRecord] = []

    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue

        fields = [field.strip() for field in line.rstrip("\r\n").split(FIELD_SEPARATOR)]

        if not 2 <= len(fields) <= 4 or not fields[0] or not fields[1]:
            raise ManifestError(f"{source}:{line_number}: expected 2 to 4 tab separated fields, got {len(fields)}")

        fixations = fields[2] if len(fields) > 2 and fields[2] not in ("", NO_FILE) else None
        split = fields[3] if len(fields) > 3 and fields[3] else DEFAULT_SPLIT

        records.append(
            ManifestRecord(
                image=_resolve(fields[0], root),
                saliency=_resolve(fields[1], root),
                fixations=_resolve(fixations, root) if fixations else None,
                split=split,
            )
        )

    return CorpusManifest(records=records, source=None if source == "<manifest>" else Path(source))


def load_manifest(path: PathLikeT) -> CorpusManifest:
    """
    Parse a manifest file and check that every referenced file exists
    """
    manifest_path = Path(path)

    try:
        text = manifest_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ManifestError(f"Cannot read manifest {manifest_path}: {e}") from e

    manifest = parse_manifest(text, manifest_path.parent, str(manifest_path))

    for record in manifest.records:
        for referenced in (record.image, record.saliency, record.fixations):
            if referenced is not None and not referenced.is_file():
                raise ManifestError(f"{manifest_path}: referenced file {referenced} does not exist")

    logger.debug("Loaded manifest %s with %d records", manifest_path, len(manifest))

    return manifest


def load_record(record: ManifestRecord) -> CorpusRecord:
    image = load_image(record.image)
    saliency = load_saliency(record.saliency)
    fixations = load_fixations(record.fixations) if record.fixations else None

    for what, raster in (("saliency", saliency), ("fixations", fixations)):
        if raster is not None and (raster.height, raster.width) != (image.height, image.width):
            raise ManifestError(
                f"{record.name}: {what} is {raster.width}x{raster.height}, image is {image.width}x{image.height}"
            )

    return CorpusRecord(record=record, image=image, saliency=saliency, fixations=fixations)
